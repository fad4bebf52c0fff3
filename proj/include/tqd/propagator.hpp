#pragma once

// Time-dependent two-level Schroedinger propagation for any coefficient
// source (H0, H0+H1, or the rotated H'). Stepping is the exponential of the
// midpoint-sampled Hamiltonian, which is exactly unitary per step and
// globally second order; the step count is doubled until the final
// populations are stable.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tqd/drive.hpp"
#include "tqd/params.hpp"

namespace tqd {

using cplx = std::complex<double>;

struct QuantumState {
    cplx up{0.0, 0.0};    // amplitude on |1>  = (1, 0)
    cplx down{1.0, 0.0};  // amplitude on |-1> = (0, 1)

    double p_up() const { return std::norm(up); }
    double p_down() const { return std::norm(down); }
    double norm2() const { return std::norm(up) + std::norm(down); }

    void require_normalized(double tol = 1e-10) const {
        if (std::abs(norm2() - 1.0) > tol)
            throw std::invalid_argument("state is not normalized");
    }

    static QuantumState ket_up() { return {cplx{1.0, 0.0}, cplx{0.0, 0.0}}; }
    static QuantumState ket_down() { return {cplx{0.0, 0.0}, cplx{1.0, 0.0}}; }
};

inline cplx overlap(const QuantumState& a, const QuantumState& b) {
    return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

// |<target|state>|^2
inline double transfer_fidelity(const QuantumState& state,
                                const QuantumState& target) {
    return std::norm(overlap(target, state));
}

// Real coefficient triple of H(t) = (hbar/2) [[hz, hx+i*hy], [hx-i*hy, -hz]],
// all in rad/ns.
struct HamiltonianCoeffs {
    double hx = 0.0, hy = 0.0, hz = 0.0;
};

using CoeffSource = std::function<HamiltonianCoeffs(double)>;

inline CoeffSource reference_source(const DriveModel& m) {
    return [&m](double t) {
        const DriveChannels c = m.channels(t);
        return HamiltonianCoeffs{0.0, c.Y, c.Z};
    };
}

inline CoeffSource counterdiabatic_source(const DriveModel& m) {
    return [&m](double t) {
        const DriveChannels c = m.channels(t);
        return HamiltonianCoeffs{c.dtheta, c.Y, c.Z};
    };
}

// Sampled coefficients for propagation without a generating model.
struct HamiltonianTrace {
    std::vector<double> t;
    std::vector<double> hx, hy, hz;
};

namespace detail {

// Local 4-point Lagrange cubic on the bracketing window.
inline double cubic_eval(const std::vector<double>& xs,
                         const std::vector<double>& ys, std::size_t i0,
                         double x) {
    double acc = 0.0;
    for (std::size_t j = i0; j < i0 + 4; ++j) {
        double term = ys[j];
        for (std::size_t k = i0; k < i0 + 4; ++k) {
            if (k == j) continue;
            term *= (x - xs[k]) / (xs[j] - xs[k]);
        }
        acc += term;
    }
    return acc;
}

}  // namespace detail

inline CoeffSource interpolated_source(HamiltonianTrace trace) {
    if (trace.t.size() < 4)
        throw std::invalid_argument("interpolated_source: need >= 4 samples");
    for (std::size_t i = 1; i < trace.t.size(); ++i)
        if (!(trace.t[i] > trace.t[i - 1]))
            throw std::invalid_argument(
                "interpolated_source: grid must increase strictly");
    return [tr = std::move(trace)](double t) {
        const auto& xs = tr.t;
        std::size_t hi = std::lower_bound(xs.begin(), xs.end(), t) - xs.begin();
        if (hi == 0) hi = 1;
        if (hi >= xs.size()) hi = xs.size() - 1;
        std::size_t i0 = (hi >= 2) ? hi - 2 : 0;
        if (i0 + 4 > xs.size()) i0 = xs.size() - 4;
        return HamiltonianCoeffs{detail::cubic_eval(xs, tr.hx, i0, t),
                                 detail::cubic_eval(xs, tr.hy, i0, t),
                                 detail::cubic_eval(xs, tr.hz, i0, t)};
    };
}

struct StepUnitary {
    cplx u11, u12, u21, u22;
};

// exp(-i*dt*H/hbar) for the coefficient triple h, exact for constant h.
inline StepUnitary step_unitary(const HamiltonianCoeffs& h, double dt) {
    const double omega =
        std::sqrt(h.hx * h.hx + h.hy * h.hy + h.hz * h.hz);
    const double phi = 0.5 * omega * dt;
    const double c = std::cos(phi);
    const double sfac = (omega > 0.0) ? std::sin(phi) / omega : 0.5 * dt;
    return StepUnitary{
        cplx{c, -sfac * h.hz},
        cplx{sfac * h.hy, -sfac * h.hx},
        cplx{-sfac * h.hy, -sfac * h.hx},
        cplx{c, sfac * h.hz},
    };
}

struct EvolutionResult {
    std::vector<double> t;
    std::vector<double> P1, Pm1;
    std::vector<cplx> up, down;   // per-sample amplitudes
    QuantumState final_state;
    double norm_drift = 0.0;      // max |P1 + Pm1 - 1| over samples
    long steps = 0;
    bool converged = true;        // set by the adaptive driver
    double z0_phase = 0.0;        // accumulated shift phase, if requested
};

struct PropagateOptions {
    long total_steps = 0;    // 0 = 10000 per ns of protocol
    // optional global-shift integrand Z0(t) in meV; phase = int Z0 dt / hbar
    std::function<double(double)> z0_shift_meV;
};

// Fixed-budget propagation, recording amplitudes at the sample times.
inline EvolutionResult propagate_fixed(const CoeffSource& H,
                                       const QuantumState& initial,
                                       const std::vector<double>& samples,
                                       const PropagateOptions& opt = {}) {
    if (samples.size() < 2)
        throw std::invalid_argument("propagate: need >= 2 sample times");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i] > samples[i - 1]))
            throw std::invalid_argument("propagate: non-monotone sample grid");
    initial.require_normalized();

    const double t0 = samples.front();
    const double tspan = samples.back() - t0;
    long total = opt.total_steps;
    if (total <= 0) total = std::lround(10000.0 * tspan) + 1;
    const long per =
        std::max<long>(1, (total + static_cast<long>(samples.size()) - 2) /
                              (static_cast<long>(samples.size()) - 1));

    EvolutionResult res;
    const std::size_t n = samples.size();
    res.t = samples;
    res.P1.resize(n);
    res.Pm1.resize(n);
    res.up.resize(n);
    res.down.resize(n);

    QuantumState s = initial;
    double z0_phase = 0.0;
    auto record = [&](std::size_t i) {
        cplx a = s.up, b = s.down;
        if (opt.z0_shift_meV) {
            const cplx f = std::exp(cplx{0.0, -z0_phase});
            a *= f;
            b *= f;
        }
        res.up[i] = a;
        res.down[i] = b;
        res.P1[i] = std::norm(a);
        res.Pm1[i] = std::norm(b);
        res.norm_drift =
            std::max(res.norm_drift, std::abs(res.P1[i] + res.Pm1[i] - 1.0));
    };

    record(0);
    for (std::size_t i = 1; i < n; ++i) {
        const double ta = samples[i - 1];
        const double dt = (samples[i] - ta) / static_cast<double>(per);
        for (long k = 0; k < per; ++k) {
            const double tm = ta + (static_cast<double>(k) + 0.5) * dt;
            const StepUnitary U = step_unitary(H(tm), dt);
            const cplx a = U.u11 * s.up + U.u12 * s.down;
            const cplx b = U.u21 * s.up + U.u22 * s.down;
            s.up = a;
            s.down = b;
            if (opt.z0_shift_meV)
                z0_phase += opt.z0_shift_meV(tm) / kHbar_meV_ns * dt;
        }
        record(i);
    }
    res.final_state = {res.up.back(), res.down.back()};
    res.steps = per * static_cast<long>(n - 1);
    res.z0_phase = z0_phase;
    return res;
}

// Doubles the step count until halving it moves the recorded populations
// by less than pop_tol anywhere on the sample grid (the final values are
// often pinned at 0/1 and would converge deceptively fast on their own).
inline EvolutionResult propagate(const CoeffSource& H,
                                 const QuantumState& initial,
                                 const std::vector<double>& samples,
                                 PropagateOptions opt = {},
                                 double pop_tol = 1e-8,
                                 int max_doublings = 8) {
    if (opt.total_steps <= 0)
        opt.total_steps =
            std::lround(10000.0 * (samples.back() - samples.front())) + 1;
    EvolutionResult coarse = propagate_fixed(H, initial, samples, opt);
    for (int it = 0; it < max_doublings; ++it) {
        PropagateOptions fine_opt = opt;
        fine_opt.total_steps = coarse.steps * 2;
        EvolutionResult fine = propagate_fixed(H, initial, samples, fine_opt);
        double miss = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            miss = std::max(miss, std::abs(fine.P1[i] - coarse.P1[i]));
        if (miss < pop_tol) {
            fine.converged = true;
            return fine;
        }
        coarse = std::move(fine);
    }
    throw std::runtime_error(
        "propagate: populations did not converge under step doubling");
}

struct Eigensystem {
    double theta;          // atan2(hy, hz)
    QuantumState chi_plus; // (cos(theta/2) e^{i pi/2}, sin(theta/2))
    QuantumState chi_minus;
    double E_plus_meV, E_minus_meV;  // +-(hbar/2) sqrt(hy^2+hz^2)
};

// Instantaneous eigenstates of (hbar/2) [[hz, i*hy], [-i*hy, -hz]].
inline Eigensystem instantaneous_eigenstates(double hy, double hz) {
    const double gap = std::sqrt(hy * hy + hz * hz);
    if (gap < kGapFloor_radns)
        throw std::runtime_error("instantaneous_eigenstates: gap closed");
    Eigensystem e;
    e.theta = std::atan2(hy, hz);
    const double ch = std::cos(0.5 * e.theta);
    const double sh = std::sin(0.5 * e.theta);
    e.chi_plus = {cplx{0.0, ch}, cplx{sh, 0.0}};
    e.chi_minus = {cplx{sh, 0.0}, cplx{0.0, ch}};
    e.E_plus_meV = 0.5 * kHbar_meV_ns * gap;
    e.E_minus_meV = -e.E_plus_meV;
    return e;
}

// Adiabatic approximation of H0: chi_+(t) dressed with the dynamical phase
// exp[-(i/hbar) int E_+ dt'] (trapezoid), so P1_in(t) = cos^2(theta/2).
inline EvolutionResult adiabatic_reference(const DriveTrace& tr) {
    if (tr.gap_closed)
        throw std::runtime_error("adiabatic_reference: gap closed on trace");
    EvolutionResult res;
    const std::size_t n = tr.size();
    res.t = tr.t;
    res.P1.resize(n);
    res.Pm1.resize(n);
    res.up.resize(n);
    res.down.resize(n);
    double phase = 0.0;  // int E_+/hbar dt' = int gap/2 dt'
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const double g0 = std::hypot(tr.Y[i - 1], tr.Z[i - 1]);
            const double g1 = std::hypot(tr.Y[i], tr.Z[i]);
            phase += 0.25 * (g0 + g1) * (tr.t[i] - tr.t[i - 1]);
        }
        const double ch = std::cos(0.5 * tr.theta[i]);
        const double sh = std::sin(0.5 * tr.theta[i]);
        const cplx f = std::exp(cplx{0.0, -phase});
        res.up[i] = f * cplx{0.0, ch};
        res.down[i] = f * cplx{sh, 0.0};
        res.P1[i] = ch * ch;
        res.Pm1[i] = sh * sh;
    }
    res.final_state = {res.up.back(), res.down.back()};
    return res;
}

}  // namespace tqd
