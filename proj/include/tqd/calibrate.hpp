#pragma once

// Deterministic calibration of the tanh ansatz against the reported
// working point: diabatic endpoint P1^0(tf) and peak counter-diabatic
// field |EyD|. Coarse grid search over the endpoint-matched pulse
// families, then compass refinement; ties break toward smaller U0, then
// smaller w1.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "tqd/drive.hpp"
#include "tqd/propagator.hpp"
#include "tqd/pulse.hpp"

namespace tqd {

struct CalibrationTargets {
    double p1_reference = 0.76;   // H0-only endpoint population on |1>
    double eyd_peak_Vpm = 0.94;   // peak |EyD| of the CD correction
    double weight_p1 = 1.0;
    double weight_eyd = 0.1;      // multiplies the relative EyD miss
    // feasibility window on the reference-field scale, V/m
    double ex_peak_min_Vpm = 5.0;
    double ex_peak_max_Vpm = 30.0;
};

struct SearchBox {
    double U0_lo = 0.005, U0_hi = 0.05;  // meV
    double a_lo = 0.1, a_hi = 0.9;
    double w_lo = 0.05, w_hi = 0.5;
};

struct CalibrationResult {
    bool feasible = false;
    PulseAnsatz ansatz;
    double p1_reference = 0.0;   // achieved, recomputed at full fidelity
    double max_abs_EyD = 0.0;    // V/m
    double max_abs_Ex = 0.0;     // V/m, max over both dots
    double objective = 0.0;
    long evaluated = 0;          // candidates scored
    std::vector<std::string> infeasibility;  // populated when !feasible
};

namespace detail {

struct CalScore {
    bool ok = false;
    double p1 = 0.0, eyd = 0.0, ex = 0.0, obj = 0.0;
};

// The free coordinates of a candidate; w2 is tied to the family so the
// endpoint condition u1=u2 holds exactly on one side and deep in the tanh
// tails on the other.
struct CalPoint {
    int family;  // 0: a1/w1 = a2/w2 (matched at t=0), 1: matched at t=tf
    double U0, a1, w1, da;  // da = a1 - a2 > 0

    PulseAnsatz ansatz(double tf) const {
        PulseAnsatz an;
        an.U0_meV = U0;
        an.a1 = a1;
        an.w1 = w1;
        an.a2 = a1 - da;
        an.w2 = (family == 0) ? w1 * (an.a2 / a1)
                              : w1 * ((1.0 - an.a2) / (1.0 - a1));
        an.tf_ns = tf;
        return an;
    }
};

inline bool in_box(const PulseAnsatz& an, const SearchBox& box) {
    auto within = [](double x, double lo, double hi) {
        return x >= lo && x <= hi;
    };
    return within(an.U0_meV, box.U0_lo, box.U0_hi) &&
           within(an.a1, box.a_lo, box.a_hi) &&
           within(an.a2, box.a_lo, box.a_hi) &&
           within(an.w1, box.w_lo, box.w_hi) &&
           within(an.w2, box.w_lo, box.w_hi);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = (n == 1) ? lo : lo + (hi - lo) * i / (n - 1.0);
    return v;
}

inline std::vector<double> geomspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = (n == 1) ? lo : lo * std::pow(hi / lo, i / (n - 1.0));
    return v;
}

}  // namespace detail

class Calibrator {
public:
    Calibrator(const PhysicalParams& params, CalibrationTargets targets = {},
               SearchBox box = {})
        : params_(params), targets_(targets), box_(box) {}

    // Scores one ansatz: filters, then H0 propagation for P1 and field
    // scan for the peaks. Fidelity is tunable so the coarse pass stays
    // cheap; the reported result is always recomputed at full fidelity.
    detail::CalScore score(const PulseAnsatz& an, int grid, long steps,
                           std::map<std::string, long>* reject_log = nullptr) const {
        auto reject = [&](const std::string& why) {
            if (reject_log) ++(*reject_log)[why];
            return detail::CalScore{};
        };
        try {
            an.validate_basic();
        } catch (const std::exception&) {
            return reject("basic ansatz invariants (w > 0, 0 < a < 1)");
        }
        if (!detail::in_box(an, box_)) return reject("outside search box");
        if (!an.endpoints_matched())
            return reject("endpoint condition Y(0)=Y(tf)=0");

        DriveModel model(params_, an);
        DriveTrace tr;
        try {
            tr = build_drive_trace(model, grid);
        } catch (const std::exception&) {
            return reject("mixing-angle unwrap (grid too coarse)");
        }
        if (!transfer_violations(tr).empty())
            return reject("transfer trace invariants "
                          "(theta boundaries / Y sign / Z sign flip)");
        const FieldTrace f = build_field_trace(model, tr.t);
        const double ex = std::max(f.max_abs_Ex1, f.max_abs_Ex2);
        if (ex < targets_.ex_peak_min_Vpm || ex > targets_.ex_peak_max_Vpm)
            return reject("reference field peak outside window");

        PropagateOptions opt;
        opt.total_steps = steps;
        const EvolutionResult ev = propagate_fixed(
            reference_source(model), QuantumState::ket_down(), tr.t, opt);
        detail::CalScore s;
        s.ok = true;
        s.p1 = ev.P1.back();
        s.eyd = f.max_abs_EyD;
        s.ex = ex;
        s.obj = targets_.weight_p1 * std::abs(s.p1 - targets_.p1_reference) +
                targets_.weight_eyd *
                    std::abs(s.eyd - targets_.eyd_peak_Vpm) /
                    targets_.eyd_peak_Vpm;
        return s;
    }

    CalibrationResult run(double tf) const {
        using detail::CalPoint;
        constexpr int kCoarseGrid = 1601;
        constexpr long kCoarseSteps = 6400;

        std::map<std::string, long> rejects;
        long evaluated = 0;

        const auto U0s = detail::geomspace(box_.U0_lo, box_.U0_hi, 12);
        const auto a1s = detail::linspace(box_.a_lo, box_.a_hi, 17);
        const auto w1s = detail::geomspace(box_.w_lo, box_.w_hi, 10);
        auto das = detail::geomspace(0.002, 0.2, 12);
        // make a box collapsed around one candidate resolvable exactly
        if (box_.a_hi > box_.a_lo) {
            das.push_back(box_.a_hi - box_.a_lo);
            das.push_back(0.5 * (box_.a_hi - box_.a_lo));
        }
        // widest width still compatible with the endpoint condition: the
        // un-matched side must sit >= ~11 widths into the tanh tail
        auto w1_candidates = [&](int family, double a1) {
            auto ws = w1s;
            const double edge =
                (family == 0) ? (1.0 - a1) / 11.07 : a1 / 11.07;
            if (edge >= box_.w_lo && edge <= box_.w_hi) ws.push_back(edge);
            return ws;
        };

        struct Ranked {
            double obj, U0, w1;
            CalPoint pt;
            bool operator<(const Ranked& o) const {
                if (obj != o.obj) return obj < o.obj;
                if (U0 != o.U0) return U0 < o.U0;
                return w1 < o.w1;
            }
        };
        std::vector<Ranked> top;       // ranked by the search objective
        std::vector<Ranked> top_field; // ranked with the field miss dominant

        for (int family = 0; family < 2; ++family)
            for (double U0 : U0s)
                for (double a1 : a1s)
                    for (double w1 : w1_candidates(family, a1))
                        for (double da : das) {
                            CalPoint pt{family, U0, a1, w1, da};
                            const auto s = score(pt.ansatz(tf), kCoarseGrid,
                                                 kCoarseSteps, &rejects);
                            ++evaluated;
                            if (!s.ok) continue;
                            top.push_back({s.obj, U0, w1, pt});
                            const double field_obj =
                                std::abs(s.p1 - targets_.p1_reference) +
                                std::abs(s.eyd - targets_.eyd_peak_Vpm) /
                                    targets_.eyd_peak_Vpm;
                            top_field.push_back({field_obj, U0, w1, pt});
                        }

        if (top.empty()) {
            CalibrationResult res;
            res.feasible = false;
            res.evaluated = evaluated;
            res.infeasibility.push_back(
                "no feasible ansatz in the search box; rejection counts:");
            for (const auto& [why, count] : rejects)
                res.infeasibility.push_back(
                    "  " + why + ": " + std::to_string(count));
            return res;
        }
        std::sort(top.begin(), top.end());
        if (top.size() > 8) top.resize(8);
        // seed the refinement from the best field-miss basin as well; it is
        // usually a different corner of the box than the best P1 basin
        std::sort(top_field.begin(), top_field.end());
        if (top_field.size() > 8) top_field.resize(8);
        for (const auto& r : top_field) top.push_back(r);

        // Compass refinement from each surviving coarse point.
        Ranked best = top.front();
        for (const auto& start : top) {
            CalPoint cur = start.pt;
            // re-score: the field-ranked seeds carry a different figure
            const auto s0 = score(cur.ansatz(tf), kCoarseGrid, kCoarseSteps);
            ++evaluated;
            if (!s0.ok) continue;
            double cur_obj = s0.obj;
            double hU = 0.25 * cur.U0, ha = 0.04, hw = 0.15 * cur.w1,
                   hd = 0.3 * cur.da;
            for (int iter = 0; iter < 64; ++iter) {
                bool improved = false;
                const CalPoint base = cur;
                for (int dim = 0; dim < 4; ++dim)
                    for (int sign = -1; sign <= 1; sign += 2) {
                        CalPoint trial = base;
                        if (dim == 0) trial.U0 += sign * hU;
                        if (dim == 1) trial.a1 += sign * ha;
                        if (dim == 2) trial.w1 += sign * hw;
                        if (dim == 3) trial.da += sign * hd;
                        if (trial.da <= 0.0) continue;
                        const auto s = score(trial.ansatz(tf), kCoarseGrid,
                                             kCoarseSteps);
                        ++evaluated;
                        if (s.ok && s.obj < cur_obj) {
                            cur = trial;
                            cur_obj = s.obj;
                            improved = true;
                        }
                    }
                if (!improved) {
                    hU *= 0.5;
                    ha *= 0.5;
                    hw *= 0.5;
                    hd *= 0.5;
                    if (ha < 1e-5) break;
                }
            }
            Ranked cand{cur_obj, cur.U0, cur.w1, cur};
            if (cand < best) best = cand;
        }

        // Full-fidelity restatement of the winner.
        CalibrationResult res;
        res.feasible = true;
        res.evaluated = evaluated;
        res.ansatz = best.pt.ansatz(tf);
        const auto s = evaluate_full(res.ansatz);
        res.p1_reference = s.p1;
        res.max_abs_EyD = s.eyd;
        res.max_abs_Ex = s.ex;
        res.objective = s.obj;
        return res;
    }

    // Full-fidelity evaluation used both for the stored result and for the
    // recompute-from-scratch consistency check.
    detail::CalScore evaluate_full(const PulseAnsatz& an) const {
        return score(an, kDefaultGrid, 0);  // 0 -> default steps + exact grid
    }

private:
    PhysicalParams params_;
    CalibrationTargets targets_;
    SearchBox box_;
};

inline CalibrationResult calibrate_ansatz(const PhysicalParams& p,
                                          CalibrationTargets targets = {},
                                          SearchBox box = {}) {
    return Calibrator(p, targets, box).run(p.tf_ns);
}

}  // namespace tqd
