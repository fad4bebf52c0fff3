#pragma once

// z-axis picture change: polar form (Q, phi) of the off-diagonal X + iY,
// the transformed Hamiltonian H' = (hbar/2) [[Z+dphi, iQ], [-iQ, -Z-dphi]],
// and the inversion of its coefficients into new x-only drives.

#include <cmath>
#include <string>
#include <vector>

#include "tqd/drive.hpp"
#include "tqd/params.hpp"
#include "tqd/propagator.hpp"

namespace tqd {

// Below this the polar angle of (X, Y) is numerically meaningless.
inline constexpr double kPolarSingular_radns = 1e-9;

struct RotatedChannels {
    double Q, dQ;        // rad/ns, rad/ns^2
    double phi;          // atan2(Y, X), principal
    double dphi, ddphi;  // rad/ns, rad/ns^2
    double Zeff, dZeff;  // Z + dphi and its derivative
    double u1n, u2n;     // meV, new reduced x-drives
    double du1n, du2n;   // meV/ns
    double Ex1n, Ex2n;   // V/m
    bool singular;       // Q below kPolarSingular_radns
};

// New drives solving  hbar*Zeff = -J - Delta + (u1n + u2n)  and
// hbar*Q = -r * (u1n - u2n); always solvable since r > 0.
inline void invert_to_x_drives(const DriveModel& m, double Zeff, double Q,
                               double& u1n, double& u2n) {
    const double hbar = m.units().hbar;
    const double sum = hbar * Zeff + m.params().J_meV + m.zeeman_meV();
    const double diff = -hbar * Q / coupling_ratio(m.params());
    u1n = 0.5 * (sum + diff);
    u2n = 0.5 * (sum - diff);
}

inline RotatedChannels rotated_channels(const DriveModel& m,
                                        const DriveChannels& c) {
    const double X = c.dtheta, dX = c.ddtheta, ddX = c.dddtheta;
    RotatedChannels rc;
    const double Q2 = X * X + c.Y * c.Y;
    rc.Q = std::sqrt(Q2);
    rc.phi = std::atan2(c.Y, X);
    rc.singular = rc.Q < kPolarSingular_radns;
    if (Q2 > 0.0) {
        const double M = c.dY * X - c.Y * dX;
        const double dM = c.ddY * X - c.Y * ddX;
        const double dQ2 = 2.0 * (X * dX + c.Y * c.dY);
        rc.dphi = M / Q2;
        rc.ddphi = (dM * Q2 - M * dQ2) / (Q2 * Q2);
        rc.dQ = 0.5 * dQ2 / rc.Q;
    } else {
        // off-diagonal identically zero here: H' reduces to H
        rc.dphi = 0.0;
        rc.ddphi = 0.0;
        rc.dQ = 0.0;
    }
    rc.Zeff = c.Z + rc.dphi;
    rc.dZeff = c.dZ + rc.ddphi;
    invert_to_x_drives(m, rc.Zeff, rc.Q, rc.u1n, rc.u2n);
    const double hbar = m.units().hbar;
    const double r = coupling_ratio(m.params());
    rc.du1n = 0.5 * (hbar * rc.dZeff - hbar * rc.dQ / r);
    rc.du2n = 0.5 * (hbar * rc.dZeff + hbar * rc.dQ / r);
    rc.Ex1n = -rc.du1n / m.units().c_beta;
    rc.Ex2n = -rc.du2n / m.units().c_beta;
    return rc;
}

struct RotatedDrive {
    std::vector<double> t;
    std::vector<double> Q, phi, dphi, Zeff;
    std::vector<double> u1n, u2n, Ex1n, Ex2n;
    std::vector<std::string> warnings;
    // coefficient-space norm of H' - H at the protocol boundaries:
    // sqrt(dphi^2 + X^2 + (Q - Y)^2), rad/ns
    double endpoint_mismatch_t0 = 0.0;
    double endpoint_mismatch_tf = 0.0;

    std::size_t size() const { return t.size(); }
};

inline double picture_mismatch(const DriveChannels& c,
                               const RotatedChannels& rc) {
    const double dq = rc.Q - c.Y;
    return std::sqrt(rc.dphi * rc.dphi + c.dtheta * c.dtheta + dq * dq);
}

inline RotatedDrive build_rotated_drive(const DriveModel& model,
                                        const std::vector<double>& grid) {
    RotatedDrive rd;
    const std::size_t n = grid.size();
    rd.t = grid;
    rd.Q.resize(n); rd.phi.resize(n); rd.dphi.resize(n); rd.Zeff.resize(n);
    rd.u1n.resize(n); rd.u2n.resize(n); rd.Ex1n.resize(n); rd.Ex2n.resize(n);

    std::vector<char> bad(n, 0);
    std::vector<double> z_raw(n);
    constexpr double two_pi = 2.0 * M_PI;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < n; ++i) {
        const DriveChannels c = model.channels(grid[i]);
        const RotatedChannels rc = rotated_channels(model, c);
        z_raw[i] = c.Z;
        rd.Q[i] = rc.Q;
        rd.dphi[i] = rc.dphi;
        rd.Zeff[i] = rc.Zeff;
        rd.u1n[i] = rc.u1n;
        rd.u2n[i] = rc.u2n;
        rd.Ex1n[i] = rc.Ex1n;
        rd.Ex2n[i] = rc.Ex2n;
        bad[i] = rc.singular ? 1 : 0;
        double ph = rc.phi;
        if (have_prev) ph += two_pi * std::round((prev - ph) / two_pi);
        rd.phi[i] = ph;
        if (!rc.singular) {
            prev = ph;
            have_prev = true;
        }
        if (i == 0) rd.endpoint_mismatch_t0 = picture_mismatch(c, rc);
        if (i + 1 == n) rd.endpoint_mismatch_tf = picture_mismatch(c, rc);
    }

    // Interior samples where Q ~ 0 carry no angle information: fill phi and
    // dphi by linear interpolation between the flanking valid samples
    // (removable singularity); boundary runs extend the nearest valid value.
    std::size_t i = 0;
    while (i < n) {
        if (!bad[i]) { ++i; continue; }
        std::size_t j = i;
        while (j < n && bad[j]) ++j;
        const bool has_left = i > 0;
        const bool has_right = j < n;
        for (std::size_t k = i; k < j; ++k) {
            if (has_left && has_right) {
                const double f = (rd.t[k] - rd.t[i - 1]) / (rd.t[j] - rd.t[i - 1]);
                rd.phi[k] = rd.phi[i - 1] + f * (rd.phi[j] - rd.phi[i - 1]);
                rd.dphi[k] = rd.dphi[i - 1] + f * (rd.dphi[j] - rd.dphi[i - 1]);
            } else if (has_right) {
                rd.phi[k] = rd.phi[j];
                rd.dphi[k] = rd.dphi[j];
            } else if (has_left) {
                rd.phi[k] = rd.phi[i - 1];
                rd.dphi[k] = rd.dphi[i - 1];
            }
            rd.Zeff[k] = z_raw[k] + rd.dphi[k];
            invert_to_x_drives(model, rd.Zeff[k], rd.Q[k], rd.u1n[k],
                               rd.u2n[k]);
        }
        const std::string span = "samples [" + std::to_string(i) + ", " +
                                 std::to_string(j - 1) + "]";
        if (has_left && has_right)
            rd.warnings.push_back("removable polar singularity: Q < 1e-9 "
                                  "rad/ns on interior " + span +
                                  "; phi/dphi interpolated");
        else
            rd.warnings.push_back("flat off-diagonal: Q < 1e-9 rad/ns on "
                                  "boundary " + span +
                                  "; phi/dphi continued from the nearest "
                                  "valid sample");
        i = j;
    }
    return rd;
}

inline RotatedDrive build_rotated_drive(const DriveModel& model,
                                        int n = kDefaultGrid) {
    return build_rotated_drive(model, uniform_grid(model.tf(), n));
}

// H' coefficients for the propagator: purely imaginary off-diagonal of
// magnitude Q and diagonal Z + dphi.
inline CoeffSource rotated_source(const DriveModel& m) {
    return [&m](double t) {
        const RotatedChannels rc = rotated_channels(m, m.channels(t));
        return HamiltonianCoeffs{0.0, rc.Q, rc.Zeff};
    };
}

}  // namespace tqd
