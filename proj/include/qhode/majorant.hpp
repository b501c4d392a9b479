// qhode/majorant.hpp
//
// Convergence certificates for the Laurent recursion. Three constants
// control the classical majorant argument:
//   A = 1 + max |c_i^(tau)| over 1 <= tau <= lambda_n (largest integer
//       eigenvalue of L), coefficients instantiated at concrete parameters;
//   B = the smallest value with |d^alpha f_i(c^(0))| <= alpha! B^|alpha|
//       over the finitely many nonzero derivatives with |alpha| >= 1;
//   C = max(A + eps, sup_{k >= lambda_n + 1} ||(L - k I)^{-1}||_inf), the
//       sup reached on a finite prefix because the norm decays like 1/k.
// The majorant coefficients follow beta_1 = A and, for k >= 2,
//   beta_k = C * [z^k] sum_{p>=2} (n B Psi(z))^p,  Psi(z) = sum beta_t z^t,
// which sums to an explicit algebraic function; its branch point gives the
// closed-form lower bound on the radius of convergence.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_MAJORANT_HPP
#define QHODE_MAJORANT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/laurent.hpp"
#include "qhode/linalg.hpp"
#include "qhode/poly.hpp"
#include "qhode/system.hpp"

namespace qhode {

struct MajorantBound {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    int n = 0;
    int lambda_n = 0;  // largest integer eigenvalue used by A (0 = none)
    double radius = 0.0;
    std::vector<double> beta;  // beta[k] for k = 0..N (beta[0] = 0)
};

namespace detail {

// Enumerate all alpha with 1 <= |alpha| <= maxdeg over n slots.
inline void for_each_multi_index(int n, int maxdeg,
                                 const std::function<void(const Exponents&)>& fn) {
    Exponents alpha(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == n) {
            if (PhasePoly::total_degree(alpha) >= 1) fn(alpha);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            alpha[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, remaining - v);
        }
        alpha[static_cast<std::size_t>(pos)] = 0;
    };
    rec(rec, 0, maxdeg);
}

}  // namespace detail

// The derivative-bound constant B at the balance point.
inline double derivative_bound_constant(const SystemSpec& spec, const Vector& c0) {
    auto f = spec.rhs_polynomials();
    auto pt = from_vector(c0);
    double b = 0.0;
    for (const auto& fi : f) {
        int deg = fi.degree();
        detail::for_each_multi_index(spec.n(), deg, [&](const Exponents& alpha) {
            PhasePoly d = fi.diff_multi(alpha);
            if (d.is_zero()) return;
            double val = std::abs(d.eval(pt));
            if (val == 0.0) return;
            int order = PhasePoly::total_degree(alpha);
            double cand = std::pow(val / multi_factorial(alpha), 1.0 / static_cast<double>(order));
            b = std::max(b, cand);
        });
    }
    return b;
}

// The resolvent-norm constant: sup over k >= k0 of ||(L - kI)^{-1}||_inf,
// scanned exactly on a prefix and closed with the Neumann tail bound
// 1/(k - ||L||) valid for k > ||L||.
inline double resolvent_bound_constant(const Matrix& l, int k0, int scan_len = 100) {
    double lnorm = inf_norm(l);
    int k_end = k0 + scan_len;
    while (static_cast<double>(k_end) <= lnorm + 1.0) ++k_end;
    double best = 0.0;
    for (int k = k0; k <= k_end; ++k) {
        Matrix shifted = l - static_cast<double>(k) * Matrix::Identity(l.rows(), l.cols());
        best = std::max(best, inverse_inf_norm(shifted));
    }
    if (static_cast<double>(k_end) + 1.0 > lnorm)
        best = std::max(best, 1.0 / (static_cast<double>(k_end) + 1.0 - lnorm));
    return best;
}

// A, B, C for one instantiated family. `assignment` fixes the free
// parameters (the certificate is per-instantiation).
inline MajorantBound majorant_constants(const SystemSpec& spec, const LaurentSolution& sol,
                                        const std::map<std::string, Scalar>& assignment,
                                        double eps = 1e-6) {
    MajorantBound out;
    out.n = sol.n();

    int lambda_n = 0;
    for (int k : sol.resonances.resonances) lambda_n = std::max(lambda_n, k);
    out.lambda_n = lambda_n;
    if (sol.order < lambda_n)
        throw not_expanded_far_enough("series truncated at order "
                                      + std::to_string(sol.order)
                                      + " but the largest resonance is "
                                      + std::to_string(lambda_n));

    double peak = 0.0;
    for (int tau = 1; tau <= lambda_n; ++tau)
        for (int i = 0; i < sol.n(); ++i)
            peak = std::max(peak, std::abs(sol.coeff[static_cast<std::size_t>(tau)]
                                               [static_cast<std::size_t>(i)].eval(assignment)));
    out.a = 1.0 + peak;

    out.b = derivative_bound_constant(spec, sol.balance.c0);
    out.c = std::max(out.a + eps, resolvent_bound_constant(sol.resonances.l, lambda_n + 1));
    return out;
}

// Smallest positive root of  n^2 A^2 B^2 z^2 - 2nAB(1+2nBC) z + 1 = 0,
// i.e. ((1+2nBC) - sqrt((1+2nBC)^2 - 1)) / (nAB): the branch point of the
// closed-form majorant sum.
inline double radius_lower_bound(double a, double b, double c, int n) {
    if (a <= 0.0 || b <= 0.0 || c <= 0.0 || n < 1)
        throw no_positive_root("majorant constants must be positive");
    double q = 1.0 + 2.0 * n * b * c;
    double disc = q * q - 1.0;
    if (disc < 0.0) throw no_positive_root("negative discriminant");  // cannot happen for q > 1
    return (q - std::sqrt(disc)) / (static_cast<double>(n) * a * b);
}

// beta_1..beta_N by the recursion; beta[0] = 0.
inline std::vector<double> majorant_coeffs(double a, double b, double c, int n, int order_n) {
    std::vector<double> beta(static_cast<std::size_t>(order_n) + 1, 0.0);
    if (order_n >= 1) beta[1] = a;
    double nb = static_cast<double>(n) * b;
    for (int k = 2; k <= order_n; ++k) {
        // psi = nB * (beta_1 z + ... + beta_{k-1} z^{k-1}); accumulate
        // [z^k] sum_{p=2..k} psi^p by repeated truncated multiplication.
        std::vector<double> psi(static_cast<std::size_t>(k) + 1, 0.0);
        for (int t = 1; t < k; ++t) psi[static_cast<std::size_t>(t)] = nb * beta[static_cast<std::size_t>(t)];
        std::vector<double> pw = psi;  // psi^1
        double total = 0.0;
        for (int p = 2; p <= k; ++p) {
            std::vector<double> nx(static_cast<std::size_t>(k) + 1, 0.0);
            for (int r = 0; r <= k; ++r) {
                if (pw[static_cast<std::size_t>(r)] == 0.0) continue;
                for (int t = 1; r + t <= k; ++t)
                    nx[static_cast<std::size_t>(r + t)] += pw[static_cast<std::size_t>(r)]
                                                           * psi[static_cast<std::size_t>(t)];
            }
            pw.swap(nx);
            total += pw[static_cast<std::size_t>(k)];
        }
        beta[static_cast<std::size_t>(k)] = c * total;
    }
    return beta;
}

// Taylor coefficients of the closed-form sum
//   Phi(z) = (1 + nABz - sqrt(1 - 2nAB(1+2nBC) z + n^2A^2B^2 z^2))
//            / (2nB(1+nBC)),
// for cross-checking the recursion. Index k = 0..N.
inline std::vector<double> majorant_closed_form_coeffs(double a, double b, double c,
                                                       int n, int order_n) {
    double nab = static_cast<double>(n) * a * b;
    double q1 = -2.0 * nab * (1.0 + 2.0 * n * b * c);
    double q2 = nab * nab;
    // sqrt of 1 + q1 z + q2 z^2 by the standard convolution recurrence.
    std::vector<double> s(static_cast<std::size_t>(order_n) + 1, 0.0);
    s[0] = 1.0;
    for (int k = 1; k <= order_n; ++k) {
        double qk = (k == 1) ? q1 : (k == 2 ? q2 : 0.0);
        double conv = 0.0;
        for (int j = 1; j < k; ++j)
            conv += s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
        s[static_cast<std::size_t>(k)] = (qk - conv) / 2.0;
    }
    double denom = 2.0 * n * b * (1.0 + n * b * c);
    std::vector<double> phi(static_cast<std::size_t>(order_n) + 1, 0.0);
    for (int k = 0; k <= order_n; ++k) {
        double num = -s[static_cast<std::size_t>(k)];
        if (k == 0) num += 1.0;
        if (k == 1) num += nab;
        phi[static_cast<std::size_t>(k)] = num / denom;
    }
    return phi;
}

// Full certificate: constants, radius, and the first N majorant coefficients.
inline MajorantBound majorant_bound(const SystemSpec& spec, const LaurentSolution& sol,
                                    const std::map<std::string, Scalar>& assignment,
                                    double eps = 1e-6) {
    MajorantBound out = majorant_constants(spec, sol, assignment, eps);
    out.radius = radius_lower_bound(out.a, out.b, out.c, out.n);
    out.beta = majorant_coeffs(out.a, out.b, out.c, out.n, sol.order);
    return out;
}

}  // namespace qhode

#endif  // QHODE_MAJORANT_HPP
