#pragma once

// Shared fixtures for the test suites: the GaAs working point, a known-good
// transfer ansatz, a seeded generator of accepted random ansatz draws, and
// finite-difference oracles for the analytic derivative channels.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "tqd/drive.hpp"
#include "tqd/params.hpp"
#include "tqd/pulse.hpp"

namespace tqd_test {

inline tqd::PhysicalParams gaas_params() {
    tqd::PhysicalParams p;
    p.g = -0.44;
    p.B_tesla = 3.43;
    p.J_meV = 0.1;
    p.hbar_alpha_meVcm = 1.2e-6;
    p.hbar_beta_meVcm = 0.3e-6;
    p.tf_ns = 2.0;
    return p;
}

// A transfer ansatz known to pass validation at the GaAs working point.
inline tqd::PulseAnsatz good_ansatz(double tf = 2.0) {
    return tqd::make_matched_ansatz(0.0085, 0.12, 0.0795, 0.102, tf);
}

// Accepted random draws: endpoint-matched family with both switches well
// inside the window and enough amplitude to flip the sign of Z.
inline tqd::PulseAnsatz random_accepted_ansatz(std::mt19937& rng,
                                               double tf = 2.0) {
    std::uniform_real_distribution<double> uw(0.02, 0.042);
    std::uniform_real_distribution<double> uu(0.007, 0.045);
    std::uniform_real_distribution<double> ud(0.15, 1.8);
    const double w1 = uw(rng);
    std::uniform_real_distribution<double> ua(11.2 * w1, 1.0 - 11.2 * w1);
    const double a1 = ua(rng);
    const double da = ud(rng) * w1;
    return tqd::make_matched_ansatz(uu(rng), a1, w1, a1 - da, tf);
}

// Central finite difference of a scalar function; the closed forms extend
// smoothly outside [0, tf], so no boundary handling is needed.
inline double central_diff(const std::function<double(double)>& f, double t,
                           double h = 1e-5) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

// max_i |a_i - b_i| / max_i |a_i|
inline double rel_supnorm_diff(const std::vector<double>& a,
                               const std::vector<double>& b) {
    double sup = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sup = std::max(sup, std::abs(a[i]));
        diff = std::max(diff, std::abs(a[i] - b[i]));
    }
    return sup > 0.0 ? diff / sup : diff;
}

}  // namespace tqd_test
