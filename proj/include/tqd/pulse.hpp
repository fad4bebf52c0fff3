#pragma once

// Reference tanh pulse pair u_j(t) = U0 * tanh[(t - a_j*tf)/(w_j*tf)] with
// closed-form derivatives up to third order. The reduced drive energies u_j
// stand in for (e*beta/c)*A^x_j, in meV.

#include <cmath>
#include <stdexcept>

namespace tqd {

// Relative tolerance on |u1 - u2| at t = 0 and t = tf; Y(0) = Y(tf) = 0 is
// required for the transfer boundary conditions.
inline constexpr double kEndpointMatchTol = 1e-9;

struct PulseSample {
    double u;    // meV
    double du;   // meV/ns
    double ddu;  // meV/ns^2
    double dddu; // meV/ns^3
};

struct PulseAnsatz {
    double U0_meV = 0.0;
    double a1 = 0.5, w1 = 0.1;  // dimensionless center / width (units of tf)
    double a2 = 0.5, w2 = 0.1;
    double tf_ns = 2.0;

    void validate_basic() const {
        if (!(w1 > 0.0) || !(w2 > 0.0))
            throw std::invalid_argument("ansatz: widths must be > 0");
        if (!(a1 > 0.0 && a1 < 1.0) || !(a2 > 0.0 && a2 < 1.0))
            throw std::invalid_argument("ansatz: centers must lie in (0, 1)");
        if (!(tf_ns > 0.0))
            throw std::invalid_argument("ansatz: tf must be > 0");
    }

    PulseSample eval(int j, double t) const {
        const double a = (j == 1) ? a1 : a2;
        const double w = (j == 1) ? w1 : w2;
        const double k = 1.0 / (w * tf_ns);
        const double s = (t - a * tf_ns) * k;
        const double th = std::tanh(s);
        const double ch = std::cosh(s);  // 1 - th^2 loses precision in tails
        const double sech2 = std::isinf(ch) ? 0.0 : 1.0 / (ch * ch);
        PulseSample ps;
        ps.u = U0_meV * th;
        ps.du = U0_meV * sech2 * k;
        ps.ddu = -2.0 * U0_meV * sech2 * th * k * k;
        ps.dddu = 2.0 * U0_meV * sech2 * (2.0 * th * th - sech2) * k * k * k;
        return ps;
    }

    // u1(0)=u2(0) and u1(tf)=u2(tf) within kEndpointMatchTol * U0.
    bool endpoints_matched() const {
        const double tol = kEndpointMatchTol * std::abs(U0_meV);
        const double d0 = std::abs(eval(1, 0.0).u - eval(2, 0.0).u);
        const double df = std::abs(eval(1, tf_ns).u - eval(2, tf_ns).u);
        return d0 <= tol && df <= tol;
    }

    void validate() const {
        validate_basic();
        if (!endpoints_matched())
            throw std::invalid_argument(
                "ansatz: endpoint condition u1=u2 at t=0 and t=tf violated "
                "(Y must vanish at the boundaries)");
    }

    // Same pulse shape stretched to k*tf (centers and widths are relative,
    // so only the duration changes).
    PulseAnsatz stretched(double k) const {
        PulseAnsatz s = *this;
        s.tf_ns = tf_ns * k;
        return s;
    }
};

// Builds an ansatz with a1/w1 = a2/w2 held exactly, which pins u1(0)=u2(0)
// bit-for-bit; the t=tf side must then be deep enough in the tanh tails.
inline PulseAnsatz make_matched_ansatz(double U0_meV, double a1, double w1,
                                       double a2, double tf_ns) {
    PulseAnsatz an;
    an.U0_meV = U0_meV;
    an.a1 = a1;
    an.w1 = w1;
    an.a2 = a2;
    an.w2 = w1 * (a2 / a1);
    an.tf_ns = tf_ns;
    return an;
}

}  // namespace tqd
