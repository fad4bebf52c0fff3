#pragma once

// Effective couplings of the reduced Hamiltonian
//   H = (hbar/2) [[Z, X + iY], [X - iY, -Z]]
// generated by the tanh pulse pair, with the mixing angle theta, the
// adiabaticity metric, the counter-diabatic term X = dtheta/dt, and the
// laboratory field traces. Every derivative channel is closed-form; finite
// differences appear only in the test oracles.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqd/params.hpp"
#include "tqd/pulse.hpp"

namespace tqd {

inline constexpr double kGapFloor_radns = 1e-6;     // gap-closure flag level
inline constexpr double kYNegativeTol_radns = 1e-9; // off-diagonal sign slack
inline constexpr double kThetaBoundaryTol_rad = 1e-3;
inline constexpr double kUnwrapMaxJump_rad = 0.5;
inline constexpr int kDefaultGrid = 4001;

// All per-time closed-form quantities of the driven two-level problem.
// Angular-frequency channels are in rad/ns and their derivatives in
// rad/ns^2, rad/ns^3; theta is the principal value, unwrapped on grids.
struct DriveChannels {
    double u1, u2;          // meV
    double du1, du2;        // meV/ns
    double ddu1, ddu2;      // meV/ns^2
    double Y, dY, ddY, dddY;
    double Z, dZ, ddZ, dddZ;
    double theta;           // atan2(Y, Z), principal
    double dtheta, ddtheta, dddtheta;
    double eta;             // |dY*Z - Y*dZ| / (Y^2+Z^2)^(3/2)
    double gap;             // sqrt(Y^2 + Z^2), rad/ns
};

class DriveModel {
public:
    DriveModel(const PhysicalParams& p, const PulseAnsatz& an)
        : params_(p), ansatz_(an), units_(field_conversion_constants(p)),
          delta_meV_(zeeman_splitting(p)), ratio_(coupling_ratio(p)) {
        p.validate();
        an.validate_basic();
    }

    const PhysicalParams& params() const { return params_; }
    const PulseAnsatz& ansatz() const { return ansatz_; }
    const UnitSystem& units() const { return units_; }
    double zeeman_meV() const { return delta_meV_; }
    double tf() const { return ansatz_.tf_ns; }

    DriveChannels channels(double t) const {
        const double hbar = units_.hbar;
        const PulseSample p1 = ansatz_.eval(1, t);
        const PulseSample p2 = ansatz_.eval(2, t);
        DriveChannels c;
        c.u1 = p1.u;
        c.u2 = p2.u;
        c.du1 = p1.du;
        c.du2 = p2.du;
        c.ddu1 = p1.ddu;
        c.ddu2 = p2.ddu;

        // hbar*Z = -J - Delta + (u1 + u2);  hbar*Y = -r * (u1 - u2)
        c.Z = (-params_.J_meV - delta_meV_ + p1.u + p2.u) / hbar;
        c.dZ = (p1.du + p2.du) / hbar;
        c.ddZ = (p1.ddu + p2.ddu) / hbar;
        c.dddZ = (p1.dddu + p2.dddu) / hbar;
        c.Y = -ratio_ * (p1.u - p2.u) / hbar;
        c.dY = -ratio_ * (p1.du - p2.du) / hbar;
        c.ddY = -ratio_ * (p1.ddu - p2.ddu) / hbar;
        c.dddY = -ratio_ * (p1.dddu - p2.dddu) / hbar;

        const double D = c.Y * c.Y + c.Z * c.Z;
        c.gap = std::sqrt(D);
        c.theta = std::atan2(c.Y, c.Z);

        // theta' = N/D with N = Y'Z - YZ', plus two more quotient-rule layers
        const double N = c.dY * c.Z - c.Y * c.dZ;
        const double dN = c.ddY * c.Z - c.Y * c.ddZ;
        const double ddN = c.dddY * c.Z + c.ddY * c.dZ - c.dY * c.ddZ -
                           c.Y * c.dddZ;
        const double dD = 2.0 * (c.Y * c.dY + c.Z * c.dZ);
        const double ddD = 2.0 * (c.dY * c.dY + c.Y * c.ddY + c.dZ * c.dZ +
                                  c.Z * c.ddZ);
        c.dtheta = N / D;
        c.ddtheta = (dN * D - N * dD) / (D * D);
        c.dddtheta = (ddN * D - N * ddD) / (D * D) -
                     2.0 * dD * (dN * D - N * dD) / (D * D * D);
        c.eta = std::abs(c.dtheta) / c.gap;
        return c;
    }

    // Global energy shift Z0 = -J/4 + Delta/2 - (u1+u2)/2, meV. Populations
    // are blind to it; the propagator can accumulate its phase on request.
    double z0_shift_meV(double t) const {
        const double usum = ansatz_.eval(1, t).u + ansatz_.eval(2, t).u;
        return -params_.J_meV / 4.0 + delta_meV_ / 2.0 - usum / 2.0;
    }

    double Ex1_Vpm(const DriveChannels& c) const { return -c.du1 / units_.c_beta; }
    double Ex2_Vpm(const DriveChannels& c) const { return -c.du2 / units_.c_beta; }
    double EyD_Vpm(const DriveChannels& c) const {
        return -units_.hbar * c.ddtheta / units_.c_alpha;
    }
    // v = hbar * X, the reduced CD drive energy (sqrt(2)e*alpha/c)(Ay1-Ay2)
    double cd_drive_energy_meV(const DriveChannels& c) const {
        return units_.hbar * c.dtheta;
    }

private:
    PhysicalParams params_;
    PulseAnsatz ansatz_;
    UnitSystem units_;
    double delta_meV_;
    double ratio_;
};

inline std::vector<double> uniform_grid(double tf, int n = kDefaultGrid) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 samples");
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = tf * static_cast<double>(i) / (n - 1);
    t.back() = tf;
    return t;
}

struct DriveTrace {
    std::vector<double> t;       // ns
    std::vector<double> u1, u2;  // meV
    std::vector<double> X, Y, Z; // rad/ns (X = dtheta, the CD term)
    std::vector<double> dY, dZ, dX;
    std::vector<double> theta, dtheta, ddtheta;
    std::vector<double> eta;
    double max_eta = 0.0;
    bool gap_closed = false;

    std::size_t size() const { return t.size(); }
};

struct FieldTrace {
    std::vector<double> t;             // ns
    std::vector<double> Ex1, Ex2, EyD; // V/m
    double max_abs_Ex1 = 0.0, max_abs_Ex2 = 0.0, max_abs_EyD = 0.0;
};

// Samples the model on a grid and unwraps theta by continuity. Throws if
// adjacent unwrapped samples jump by more than kUnwrapMaxJump_rad (grid too
// coarse to follow the mixing angle).
inline DriveTrace build_drive_trace(const DriveModel& model,
                                    const std::vector<double>& grid) {
    DriveTrace tr;
    const std::size_t n = grid.size();
    tr.t = grid;
    tr.u1.resize(n); tr.u2.resize(n);
    tr.X.resize(n); tr.Y.resize(n); tr.Z.resize(n);
    tr.dY.resize(n); tr.dZ.resize(n); tr.dX.resize(n);
    tr.theta.resize(n); tr.dtheta.resize(n); tr.ddtheta.resize(n);
    tr.eta.resize(n);

    constexpr double two_pi = 2.0 * M_PI;
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const DriveChannels c = model.channels(grid[i]);
        tr.u1[i] = c.u1; tr.u2[i] = c.u2;
        tr.Y[i] = c.Y; tr.Z[i] = c.Z;
        tr.dY[i] = c.dY; tr.dZ[i] = c.dZ;
        tr.dtheta[i] = c.dtheta; tr.ddtheta[i] = c.ddtheta;
        tr.X[i] = c.dtheta; tr.dX[i] = c.ddtheta;
        tr.eta[i] = c.eta;
        tr.max_eta = std::max(tr.max_eta, c.eta);
        if (c.gap < kGapFloor_radns) tr.gap_closed = true;

        double th = c.theta;
        // Y may sit a rounding error below zero at the boundaries (the sign
        // convention allows -1e-9); keep the start on the +pi branch.
        if (i == 0 && th < -0.5 * M_PI) th += two_pi;
        if (i > 0) th += two_pi * std::round((prev - th) / two_pi);
        if (i > 0 && std::abs(th - prev) > kUnwrapMaxJump_rad)
            throw std::runtime_error(
                "mixing angle jump of " + std::to_string(std::abs(th - prev)) +
                " rad between adjacent samples: grid too coarse");
        tr.theta[i] = th;
        prev = th;
    }
    return tr;
}

inline DriveTrace build_drive_trace(const DriveModel& model,
                                    int n = kDefaultGrid) {
    return build_drive_trace(model, uniform_grid(model.tf(), n));
}

inline FieldTrace build_field_trace(const DriveModel& model,
                                    const std::vector<double>& grid) {
    FieldTrace f;
    const std::size_t n = grid.size();
    f.t = grid;
    f.Ex1.resize(n); f.Ex2.resize(n); f.EyD.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const DriveChannels c = model.channels(grid[i]);
        f.Ex1[i] = model.Ex1_Vpm(c);
        f.Ex2[i] = model.Ex2_Vpm(c);
        f.EyD[i] = model.EyD_Vpm(c);
        if (!std::isfinite(f.Ex1[i]) || !std::isfinite(f.Ex2[i]) ||
            !std::isfinite(f.EyD[i]))
            throw std::runtime_error("field trace is not finite at t = " +
                                     std::to_string(grid[i]));
        f.max_abs_Ex1 = std::max(f.max_abs_Ex1, std::abs(f.Ex1[i]));
        f.max_abs_Ex2 = std::max(f.max_abs_Ex2, std::abs(f.Ex2[i]));
        f.max_abs_EyD = std::max(f.max_abs_EyD, std::abs(f.EyD[i]));
    }
    return f;
}

// Checks a sampled trace against the population-transfer contract. Returns
// a list of violations; empty means the trace is accepted.
inline std::vector<std::string> transfer_violations(const DriveTrace& tr) {
    std::vector<std::string> bad;
    if (tr.size() < 2) {
        bad.push_back("trace has fewer than 2 samples");
        return bad;
    }
    if (tr.gap_closed)
        bad.push_back("gap closes: Y^2+Z^2 below floor somewhere on the grid");
    if (std::abs(tr.Y.front()) > 1e-6 || std::abs(tr.Y.back()) > 1e-6)
        bad.push_back("Y does not vanish at the protocol boundaries");
    for (double y : tr.Y) {
        if (y < -kYNegativeTol_radns) {
            bad.push_back("Y goes negative: pulse ordering must keep the "
                          "off-diagonal in the upper half-plane");
            break;
        }
    }
    if (std::abs(tr.theta.front() - M_PI) > kThetaBoundaryTol_rad)
        bad.push_back("theta(0) is not pi: Z(0) must be negative with Y(0)=0");
    if (std::abs(tr.theta.back()) > kThetaBoundaryTol_rad)
        bad.push_back("theta(tf) is not 0: Z(tf) must be positive with Y(tf)=0");
    if (!(tr.Z.front() < 0.0 && tr.Z.back() > 0.0))
        bad.push_back("Z does not change sign from negative to positive");
    return bad;
}

inline void require_transfer_trace(const DriveTrace& tr) {
    const auto bad = transfer_violations(tr);
    if (!bad.empty()) {
        std::string msg = "drive trace rejected:";
        for (const auto& b : bad) msg += "\n  - " + b;
        throw std::runtime_error(msg);
    }
}

}  // namespace tqd
