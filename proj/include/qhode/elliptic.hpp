// qhode/elliptic.hpp
//
// Jacobi elliptic functions by Bulirsch's descending-Landen / AGM scheme
// (Bulirsch, Numerische Mathematik 7 (1965), p. 89), and the classical
// closed-form solution of the free rigid body in terms of sn, cn, dn, used
// as an end-to-end cross-check of the analysis pipeline on that system.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_ELLIPTIC_HPP
#define QHODE_ELLIPTIC_HPP

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

struct JacobiTriple {
    double sn = 0.0;
    double cn = 1.0;
    double dn = 1.0;
};

// sn, cn, dn at real argument u with modulus k (parameter m = k^2), by the
// arithmetic-geometric mean. Absolute error ~ sqrt(machine eps)^2 per the
// Bulirsch analysis; in practice < 1e-12 for moduli away from 1.
inline JacobiTriple jacobi_elliptic(double u, double k) {
    if (!(k >= 0.0 && k < 1.0))
        throw modulus_out_of_range("modulus must lie in [0, 1)");
    const double mc0 = 1.0 - k * k;  // complementary parameter
    JacobiTriple out;
    constexpr int kDepth = 10;  // max AGM depth; ~5 suffices in practice
    const double tol = std::sqrt(std::numeric_limits<double>::epsilon() * 0.01);

    if (mc0 != 0.0) {
        double mc = mc0;
        double c = 0.0;
        double m[kDepth], n[kDepth];
        int l = 0;
        for (double a = 1.0; l < kDepth; ++l) {
            m[l] = a;
            n[l] = mc = std::sqrt(mc);
            c = (a + mc) / 2;
            if (std::fabs(a - mc) <= tol * a) {
                ++l;
                break;
            }
            mc = a * mc;
            a = c;
        }
        double x = c * u;
        double sn = std::sin(x);
        double cn = std::cos(x);
        double dn = 1.0;
        if (sn != 0.0) {
            double a = cn / sn;
            c = a * c;
            while (l--) {
                double b = m[l];
                a = c * a;
                c = dn * c;
                dn = (n[l] + a) / (b + a);
                a = c / b;
            }
            a = 1.0 / std::sqrt(c * c + 1.0);
            sn = sn < 0 ? -a : a;
            cn = c * sn;
        }
        out.sn = sn;
        out.cn = cn;
        out.dn = dn;
    } else {
        out.sn = std::tanh(u);
        out.dn = out.cn = 1.0 / std::cosh(u);
    }
    return out;
}

struct EulerClosedFormResult {
    double amp1 = 0.0, amp2 = 0.0, amp3 = 0.0;  // amplitudes of cn, sn, dn
    double omega = 0.0;
    double k2 = 0.0;               // squared modulus
    std::array<int, 3> signs{1, 1, 1};
    double max_residual = 0.0;
    bool ok = false;
};

// The rigid-body closed form
//     m1 = s1 * A cn(w t), m2 = s2 * B sn(w t), m3 = s3 * C dn(w t)
// with
//     A^2 = (2H1 - H2 l3)/(l1 - l3),  B^2 = (2H1 - H2 l3)/(l2 - l3),
//     C^2 = (H2 l1 - 2H1)/(l1 - l3),
//     w   = sqrt((l2 - l3)(H2 l1 - 2H1)),
//     k^2 = (l1 - l2)(2H1 - H2 l3) / ((l2 - l3)(H2 l1 - 2H1)),
// valid in the energy window l2 H2 < 2 H1 < l3 H2 (so all radicands are
// positive). Principal square roots leave the three signs s_i ambiguous;
// all eight assignments are tried against the equations of motion
//     m1' = (l3-l2) m2 m3, m2' = (l1-l3) m1 m3, m3' = (l2-l1) m1 m2,
// using the exact derivatives sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn,
// and the best assignment is reported.
inline EulerClosedFormResult euler_closed_form_check(const std::array<double, 3>& lambda,
                                                     double h1, double h2,
                                                     const std::vector<double>& t_grid) {
    const double l1 = lambda[0], l2 = lambda[1], l3 = lambda[2];
    if (!(l2 * h2 < 2.0 * h1 && 2.0 * h1 < l3 * h2))
        throw invalid_regime("energies outside the window l2 H2 < 2 H1 < l3 H2");

    double a2 = (2.0 * h1 - h2 * l3) / (l1 - l3);
    double b2 = (2.0 * h1 - h2 * l3) / (l2 - l3);
    double c2 = (h2 * l1 - 2.0 * h1) / (l1 - l3);
    double w2 = (l2 - l3) * (h2 * l1 - 2.0 * h1);
    if (a2 <= 0.0 || b2 <= 0.0 || c2 <= 0.0 || w2 <= 0.0)
        throw invalid_regime("negative radicand in the closed-form amplitudes");
    double k2 = (l1 - l2) * (2.0 * h1 - h2 * l3) / ((l2 - l3) * (h2 * l1 - 2.0 * h1));
    if (!(k2 >= 0.0 && k2 < 1.0))
        throw invalid_regime("squared modulus outside [0, 1)");

    EulerClosedFormResult res;
    res.amp1 = std::sqrt(a2);
    res.amp2 = std::sqrt(b2);
    res.amp3 = std::sqrt(c2);
    res.omega = std::sqrt(w2);
    res.k2 = k2;
    double k = std::sqrt(k2);

    double best = std::numeric_limits<double>::infinity();
    std::array<int, 3> best_signs{1, 1, 1};
    for (int mask = 0; mask < 8; ++mask) {
        std::array<int, 3> s{(mask & 1) ? -1 : 1, (mask & 2) ? -1 : 1, (mask & 4) ? -1 : 1};
        double worst = 0.0;
        for (double t : t_grid) {
            JacobiTriple j = jacobi_elliptic(res.omega * t, k);
            double m1 = s[0] * res.amp1 * j.cn;
            double m2 = s[1] * res.amp2 * j.sn;
            double m3 = s[2] * res.amp3 * j.dn;
            double dm1 = -s[0] * res.amp1 * res.omega * j.sn * j.dn;
            double dm2 = s[1] * res.amp2 * res.omega * j.cn * j.dn;
            double dm3 = -s[2] * res.amp3 * res.omega * k2 * j.sn * j.cn;
            worst = std::max(worst, std::fabs(dm1 - (l3 - l2) * m2 * m3));
            worst = std::max(worst, std::fabs(dm2 - (l1 - l3) * m1 * m3));
            worst = std::max(worst, std::fabs(dm3 - (l2 - l1) * m1 * m2));
        }
        if (worst < best) {
            best = worst;
            best_signs = s;
        }
    }
    res.max_residual = best;
    res.signs = best_signs;
    res.ok = best < 1e-6;
    return res;
}

}  // namespace qhode

#endif  // QHODE_ELLIPTIC_HPP
