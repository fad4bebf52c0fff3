#pragma once

// Device parameters and unit system for the reduced two-level double-dot
// model. Internal units: energy in meV, time in ns, angular frequency in
// rad/ns, electric field in V/m.

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqd {

// CODATA values expressed in the internal unit system.
inline constexpr double kHbar_meV_ns = 6.582119569e-4;  // meV*ns
inline constexpr double kMuB_meV_per_T = 5.7883818060e-2;  // meV/T

// 1 cm/ns = 1e7 m/s; 1 eV = 1e3 meV; 1 ns = 1e-9 s.
// e * (1 m/s) * (1 V/m) * (1 ns) = 1e-9 eV = 1e-6 meV, so a velocity in
// cm/ns converts to a field-coupling constant via a single factor of 10.
inline constexpr double kFieldCoupling_meV_per_cmns = 10.0;

struct PhysicalParams {
    double g = -0.44;            // Lande factor, dimensionless
    double B_tesla = 3.43;       // static field along z, both dots
    double J_meV = 0.1;          // singlet-triplet exchange gap
    double hbar_alpha_meVcm = 1.2e-6;  // Rashba strength
    double hbar_beta_meVcm = 0.3e-6;   // Dresselhaus strength
    double tf_ns = 2.0;          // protocol duration
    bool allow_positive_g = false;

    void validate() const {
        if (!(J_meV > 0.0)) throw std::invalid_argument("params: J must be > 0");
        if (!(tf_ns > 0.0)) throw std::invalid_argument("params: tf must be > 0");
        if (!(hbar_alpha_meVcm > 0.0))
            throw std::invalid_argument("params: hbar_alpha must be > 0");
        if (!(hbar_beta_meVcm > 0.0))
            throw std::invalid_argument("params: hbar_beta must be > 0");
        if (g >= 0.0 && !allow_positive_g)
            throw std::invalid_argument(
                "params: g >= 0 (set allow_positive_g to override)");
    }
};

struct UnitSystem {
    double hbar = kHbar_meV_ns;    // meV*ns
    double mu_B = kMuB_meV_per_T;  // meV/T
    double c_beta;   // meV per (V/m * ns), x-field -> reduced drive energy u
    double c_alpha;  // meV per (V/m * ns), y-field difference -> CD energy v
};

// Zeeman splitting Delta = g * mu_B * B, signed (negative for g < 0).
inline double zeeman_splitting(const PhysicalParams& p) {
    return p.g * kMuB_meV_per_T * p.B_tesla;
}

struct ReductionValidity {
    double ratio;  // |J + Delta| / J
    bool valid;
};

// Two-level reduction holds when the |0,0> - |1,1> splitting is small
// against the exchange gap: |J + Delta| / J << 1.
inline ReductionValidity reduction_validity(const PhysicalParams& p,
                                            double threshold = 0.2) {
    if (!(p.J_meV > 0.0))
        throw std::invalid_argument("reduction_validity: J must be > 0");
    const double ratio = std::abs(p.J_meV + zeeman_splitting(p)) / p.J_meV;
    return {ratio, ratio < threshold};
}

// c_beta = e*beta, c_alpha = sqrt(2)*e*alpha with the SO velocities
// beta = hbar_beta/hbar, alpha = hbar_alpha/hbar taken in cm/ns.
inline UnitSystem field_conversion_constants(const PhysicalParams& p) {
    if (!(p.hbar_alpha_meVcm > 0.0) || !(p.hbar_beta_meVcm > 0.0))
        throw std::invalid_argument(
            "field_conversion_constants: SO strengths must be > 0");
    UnitSystem u;
    u.c_beta = kFieldCoupling_meV_per_cmns * (p.hbar_beta_meVcm / kHbar_meV_ns);
    u.c_alpha = std::sqrt(2.0) * kFieldCoupling_meV_per_cmns *
                (p.hbar_alpha_meVcm / kHbar_meV_ns);
    return u;
}

// sqrt(2)*alpha/beta, the ratio mapping (u1-u2) to the Y coupling.
inline double coupling_ratio(const PhysicalParams& p) {
    return std::sqrt(2.0) * p.hbar_alpha_meVcm / p.hbar_beta_meVcm;
}

}  // namespace tqd
