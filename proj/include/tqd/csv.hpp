#pragma once

// CSV writers for the trace types. Floating-point values carry 9
// significant digits so identical runs serialize byte-identically.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqd/drive.hpp"
#include "tqd/propagator.hpp"
#include "tqd/rotation.hpp"

namespace tqd {

inline std::string fmt_g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

inline void write_row(std::ofstream& out, const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out << ',';
        out << fmt_g9(vals[i]);
    }
    out << '\n';
}

}  // namespace detail

inline void write_drive_csv(const std::string& path, const DriveTrace& d,
                            const FieldTrace& f) {
    auto out = detail::open_out(path);
    out << "t_ns,u1_meV,u2_meV,X_radns,Y_radns,Z_radns,theta_rad,eta,"
           "Ex1_Vpm,Ex2_Vpm,EyD_Vpm\n";
    for (std::size_t i = 0; i < d.size(); ++i)
        detail::write_row(out, {d.t[i], d.u1[i], d.u2[i], d.X[i], d.Y[i],
                                d.Z[i], d.theta[i], d.eta[i], f.Ex1[i],
                                f.Ex2[i], f.EyD[i]});
}

inline void write_rotated_csv(const std::string& path, const RotatedDrive& r) {
    auto out = detail::open_out(path);
    out << "t_ns,Q_radns,phi_rad,dphi_radns,Zeff_radns,u1n_meV,u2n_meV,"
           "Ex1n_Vpm,Ex2n_Vpm\n";
    for (std::size_t i = 0; i < r.size(); ++i)
        detail::write_row(out, {r.t[i], r.Q[i], r.phi[i], r.dphi[i],
                                r.Zeff[i], r.u1n[i], r.u2n[i], r.Ex1n[i],
                                r.Ex2n[i]});
}

inline void write_evolution_csv(const std::string& path,
                                const EvolutionResult& e) {
    auto out = detail::open_out(path);
    out << "t_ns,P1,Pm1,ReUp,ImUp,ReDown,ImDown\n";
    for (std::size_t i = 0; i < e.t.size(); ++i)
        detail::write_row(out, {e.t[i], e.P1[i], e.Pm1[i], e.up[i].real(),
                                e.up[i].imag(), e.down[i].real(),
                                e.down[i].imag()});
}

struct SweepRow {
    double k;
    double tf_ns;
    double max_eta;
    double P1_reference;
    double P1_cd;
};

inline void write_sweep_csv(const std::string& path,
                            const std::vector<SweepRow>& rows) {
    auto out = detail::open_out(path);
    out << "k,t_f_ns,max_eta,P1_reference,P1_cd\n";
    for (const auto& r : rows)
        detail::write_row(out, {r.k, r.tf_ns, r.max_eta, r.P1_reference,
                                r.P1_cd});
}

}  // namespace tqd
