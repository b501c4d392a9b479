// qhode/laurent.hpp
//
// Laurent-series solutions near a movable pole. With weights s and a balance
// c, the ansatz w_i(z) = z^{-s_i} u_i(z), u_i(z) = sum_m c_i^(m) z^m turns
// the system w' = f(w) (f quasi-homogeneous) into the recursion
//
//     (L - k I) c^(k) = -[z^k] f(u_{<k}),        L = Df(c) + diag(s),
//
// because f_i(z^{-s} u) = z^{-(s_i+1)} f_i(u) exactly. At non-resonant k
// the step is a linear solve; at resonant k (k an eigenvalue of L) the
// right-hand side must be orthogonal to the left kernel — otherwise the
// series does not exist — and fresh free parameters enter along the right
// kernel. Coefficients are polynomials in those parameters (ParamPoly), so
// one expansion carries the whole family.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_LAURENT_HPP
#define QHODE_LAURENT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhode/balance.hpp"
#include "qhode/kowalevski.hpp"
#include "qhode/linalg.hpp"
#include "qhode/parampoly.hpp"
#include "qhode/poly.hpp"
#include "qhode/system.hpp"

namespace qhode {

// Truncated power series in z with ParamPoly coefficients. All arithmetic
// truncates at the common fixed order, so products stay closed.
class ZSeries {
  public:
    explicit ZSeries(int order)
        : order_(order), a_(static_cast<std::size_t>(order) + 1, ParamPoly()) {}

    static ZSeries one(int order) {
        ZSeries s(order);
        s.a_[0] = ParamPoly::constant(Scalar(1.0));
        return s;
    }

    int order() const { return order_; }
    const ParamPoly& at(int m) const { return a_[static_cast<std::size_t>(m)]; }
    void set(int m, ParamPoly p) { a_[static_cast<std::size_t>(m)] = std::move(p); }

    friend ZSeries operator+(const ZSeries& x, const ZSeries& y) {
        ZSeries out(x.order_);
        for (int m = 0; m <= x.order_; ++m)
            out.a_[static_cast<std::size_t>(m)] = x.at(m) + y.at(m);
        return out;
    }
    friend ZSeries operator*(const ZSeries& x, const ZSeries& y) {
        ZSeries out(x.order_);
        for (int p = 0; p <= x.order_; ++p) {
            if (x.at(p).is_zero()) continue;
            for (int q = 0; p + q <= x.order_; ++q) {
                if (y.at(q).is_zero()) continue;
                out.a_[static_cast<std::size_t>(p + q)] =
                    out.a_[static_cast<std::size_t>(p + q)] + x.at(p) * y.at(q);
            }
        }
        return out;
    }
    friend ZSeries operator*(const ZSeries& x, const Scalar& c) {
        ZSeries out(x.order_);
        for (int m = 0; m <= x.order_; ++m) out.a_[static_cast<std::size_t>(m)] = x.at(m) * c;
        return out;
    }

  private:
    int order_;
    std::vector<ParamPoly> a_;
};

struct ExpandOptions {
    double resonance_tol = 1e-8;     // |eigenvalue - k| below which k is resonant
    double compat_tol = 1e-8;        // left-kernel projection allowed on the rhs
    std::string param_prefix = "p";  // fresh parameters p<k> / p<k>_<j>
};

struct LaurentSolution {
    std::vector<int> s;       // weights
    Balance balance;          // the seed balance (family pinned to a number)
    int order = 0;            // coefficients 0..order are computed
    // coeff[m][i] = c_i^(m) as a polynomial in the free parameters.
    std::vector<std::vector<ParamPoly>> coeff;
    std::vector<std::string> parameters;              // in order of appearance
    std::vector<std::pair<std::string, int>> parameter_orders;  // name -> k
    ResonanceInfo resonances;

    int n() const { return static_cast<int>(s.size()); }

    // u_i(z) truncated to `ord` using only coefficients below `below`.
    ZSeries u_truncated(int i, int ord, int below) const {
        ZSeries out(ord);
        int top = std::min(ord, below - 1);
        for (int m = 0; m <= top; ++m)
            out.set(m, coeff[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)]);
        return out;
    }
};

namespace detail {

// Reduce a nullspace basis to coordinate-pivoted form: each column gets a 1
// at its pivot row and zeros at every other column's pivot row, so a fresh
// parameter IS the value of that coordinate. Ties in the pivot choice go to
// the higher coordinate index.
inline std::pair<Matrix, std::vector<int>> pivoted_basis(const Matrix& v0) {
    Matrix v = v0;
    std::vector<int> pivots;
    for (int col = 0; col < v.cols(); ++col) {
        int piv = -1;
        double best = 0.0;
        for (int r = 0; r < v.rows(); ++r) {
            bool taken = false;
            for (int p : pivots)
                if (p == r) taken = true;
            if (taken) continue;
            double m = std::abs(v(r, col));
            if (m < 1e-12) continue;
            if (m > best * (1.0 + 1e-9)) {
                best = m;
                piv = r;
            } else if (m > best * (1.0 - 1e-9)) {
                piv = r;  // near-tie: the higher coordinate index wins
                best = std::max(best, m);
            }
        }
        if (piv < 0) continue;
        v.col(col) /= v(piv, col);
        for (int other = 0; other < v.cols(); ++other) {
            if (other == col) continue;
            v.col(other) -= v(piv, other) * v.col(col);
        }
        pivots.push_back(piv);
    }
    return {v, pivots};
}

}  // namespace detail

// Expand the Laurent family seeded at `b` through order N. For a continuum
// balance the caller must pin the family parameter first (Balance::at),
// passing the pinned point via `b`; the resonance parameters stay symbolic.
inline LaurentSolution expand(const SystemSpec& spec, const std::vector<int>& s,
                              const Balance& b, int order_n,
                              const ExpandOptions& opt = {}) {
    if (!spec.rhs_is_polynomial())
        throw semantic_error("Laurent expansion requires polynomial right-hand sides");
    const int n = spec.n();
    LaurentSolution sol;
    sol.s = s;
    sol.balance = b;
    sol.order = order_n;
    sol.resonances = resonance_info(spec, s, b, opt.resonance_tol);
    sol.coeff.assign(static_cast<std::size_t>(order_n) + 1,
                     std::vector<ParamPoly>(static_cast<std::size_t>(n), ParamPoly()));
    for (int i = 0; i < n; ++i)
        sol.coeff[0][static_cast<std::size_t>(i)] = ParamPoly::constant(b.c0(i));

    auto f = spec.rhs_polynomials();
    const Matrix l = sol.resonances.l;

    for (int k = 1; k <= order_n; ++k) {
        // rhs = -[z^k] f(u_{<k}): compose f with the series known so far.
        std::vector<ParamPoly> rhs(static_cast<std::size_t>(n));
        {
            std::vector<ZSeries> u;
            u.reserve(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) u.push_back(sol.u_truncated(i, k, k));
            ZSeries one = ZSeries::one(k);
            for (int i = 0; i < n; ++i) {
                ZSeries fi = f[static_cast<std::size_t>(i)].eval_generic<ZSeries>(u, one);
                rhs[static_cast<std::size_t>(i)] = -fi.at(k);
            }
        }

        Matrix m = l - static_cast<double>(k) * Matrix::Identity(n, n);
        bool resonant = false;
        for (const Scalar& lam : sol.resonances.spectrum)
            if (std::abs(lam - Scalar(static_cast<double>(k))) < opt.resonance_tol) resonant = true;

        // Decompose the rhs by parameter monomial; solve each numeric slice.
        std::map<Exponents, Vector, GrlexLess> slices;
        std::vector<std::string> rhs_params;  // union of parameter names
        {
            // Align all components onto one parameter list by adding the
            // (term-free) union polynomial to each.
            ParamPoly probe;
            for (const auto& r : rhs) probe = probe + r * Scalar(0.0);
            for (int i = 0; i < n; ++i) {
                ParamPoly ri = rhs[static_cast<std::size_t>(i)] + probe;
                rhs_params = ri.params();
                for (const auto& [e, c] : ri.terms()) {
                    auto it = slices.find(e);
                    if (it == slices.end()) {
                        Vector v = Vector::Zero(n);
                        v(i) = c;
                        slices.emplace(e, std::move(v));
                    } else {
                        it->second(i) += c;
                    }
                }
            }
        }

        std::vector<ParamPoly> ck(static_cast<std::size_t>(n));
        auto add_solution_slice = [&](const Exponents& e, const Vector& x) {
            for (int i = 0; i < n; ++i) {
                if (std::abs(x(i)) <= kCoeffPrune) continue;
                ParamPoly term = ParamPoly::with_params(rhs_params);
                term.add_term(e, x(i));
                ck[static_cast<std::size_t>(i)] = ck[static_cast<std::size_t>(i)] + term;
            }
        };

        if (!resonant) {
            Eigen::PartialPivLU<Matrix> lu(m);
            for (const auto& [e, v] : slices) add_solution_slice(e, lu.solve(v));
        } else {
            auto sp = svd_spaces(m, opt.resonance_tol);
            // Solvability: the rhs must have no component along the left kernel.
            for (const auto& [e, v] : slices) {
                for (int c = 0; c < sp.left_nullspace.cols(); ++c) {
                    Scalar proj = sp.left_nullspace.col(c).dot(v);
                    double scale = std::max(1.0, v.template lpNorm<Eigen::Infinity>());
                    if (std::abs(proj) > opt.compat_tol * scale) {
                        ParamPoly witness = ParamPoly::with_params(rhs_params);
                        throw compatibility_obstruction(k, proj, witness.monomial_name(e));
                    }
                }
                add_solution_slice(e, pinv_solve(sp, v));
            }
            // Fresh parameters along the pivoted right kernel.
            if (sp.right_nullspace.cols() > 0) {
                auto [basis, pivots] = detail::pivoted_basis(sp.right_nullspace);
                int d = static_cast<int>(basis.cols());
                for (int jcol = 0; jcol < d; ++jcol) {
                    std::string pname = opt.param_prefix + std::to_string(k);
                    if (d > 1) pname += "_" + std::to_string(jcol + 1);
                    sol.parameters.push_back(pname);
                    sol.parameter_orders.emplace_back(pname, k);
                    // Zero the particular solution on this pivot coordinate so
                    // the parameter equals that coordinate of c^(k) exactly.
                    if (jcol < static_cast<int>(pivots.size())) {
                        int piv = pivots[static_cast<std::size_t>(jcol)];
                        ParamPoly at_piv = ck[static_cast<std::size_t>(piv)];
                        for (int i = 0; i < n; ++i) {
                            if (std::abs(basis(i, jcol)) <= 1e-14) continue;
                            ck[static_cast<std::size_t>(i)] =
                                ck[static_cast<std::size_t>(i)] - at_piv * basis(i, jcol);
                        }
                    }
                    for (int i = 0; i < n; ++i) {
                        if (std::abs(basis(i, jcol)) <= 1e-14) continue;
                        ck[static_cast<std::size_t>(i)] =
                            ck[static_cast<std::size_t>(i)]
                            + ParamPoly::parameter(pname, basis(i, jcol));
                    }
                }
            }
        }
        sol.coeff[static_cast<std::size_t>(k)] = std::move(ck);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Composition of a scalar observable with the Laurent family.

// Laurent series of g(w(z)) with ParamPoly coefficients: orders low..high
// are stored and exactly those are trustworthy given the truncation order
// of the underlying family.
struct ComposedLaurent {
    int low = 0;
    int high = -1;
    std::vector<ParamPoly> coeff;  // coeff[m - low]

    const ParamPoly& at(int m) const { return coeff[static_cast<std::size_t>(m - low)]; }
    bool in_range(int m) const { return m >= low && m <= high; }
};

// g(w(z)) where w_i = z^{-s_i} u_i. Each monomial w^e contributes
// z^{-<e,s>} u^e; u^e is known to z^N, so the composed coefficients are
// valid for orders m <= N - max_e <e,s>.
inline ComposedLaurent compose_series(const LaurentSolution& sol, const PhasePoly& g) {
    const int n = sol.n();
    if (g.arity() != n) throw dimension_mismatch("observable arity mismatch");
    const int order_n = sol.order;
    int depth = 0;
    for (const auto& [e, c] : g.terms())
        depth = std::max(depth, PhasePoly::weighted_degree(e, sol.s));

    ComposedLaurent out;
    out.low = -depth;
    out.high = order_n - depth;
    out.coeff.assign(static_cast<std::size_t>(out.high - out.low + 1), ParamPoly());
    if (g.is_zero()) return out;

    std::vector<ZSeries> u;
    u.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u.push_back(sol.u_truncated(i, order_n, order_n + 1));
    ZSeries one = ZSeries::one(order_n);

    for (const auto& [e, c] : g.terms()) {
        int d = PhasePoly::weighted_degree(e, sol.s);
        ZSeries term = one;
        for (int j = 0; j < n; ++j) {
            for (int r = 0; r < e[static_cast<std::size_t>(j)]; ++r)
                term = term * u[static_cast<std::size_t>(j)];
        }
        // term * c shifted by z^{-d}; keep only orders valid for every term.
        for (int m = 0; m <= order_n; ++m) {
            int shifted = m - d;
            if (shifted > out.high) break;
            out.coeff[static_cast<std::size_t>(shifted - out.low)] =
                out.coeff[static_cast<std::size_t>(shifted - out.low)] + term.at(m) * c;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numeric instantiation of a family at a concrete parameter assignment.

struct NumericSeries {
    std::vector<int> s;
    // a[m][i] = numeric c_i^(m)
    std::vector<std::vector<Scalar>> a;

    int n() const { return static_cast<int>(s.size()); }
    int order() const { return static_cast<int>(a.size()) - 1; }

    // w_i(z) = z^{-s_i} sum a[m][i] z^m, truncated.
    std::vector<Scalar> eval(const Scalar& z) const {
        std::vector<Scalar> w(static_cast<std::size_t>(n()));
        for (int i = 0; i < n(); ++i) {
            Scalar acc(0.0);
            Scalar zp(1.0);
            for (std::size_t m = 0; m < a.size(); ++m) {
                acc += a[m][static_cast<std::size_t>(i)] * zp;
                zp *= z;
            }
            w[static_cast<std::size_t>(i)] =
                acc * std::pow(z, Scalar(-static_cast<double>(s[static_cast<std::size_t>(i)])));
        }
        return w;
    }

    // d/dz of the truncated expression (exact derivative of the truncation):
    // each term a z^{m - s_i} differentiates to a (m - s_i) z^{m - s_i - 1}.
    std::vector<Scalar> eval_derivative(const Scalar& z) const {
        std::vector<Scalar> dw(static_cast<std::size_t>(n()));
        for (int i = 0; i < n(); ++i) {
            Scalar acc(0.0);
            for (std::size_t m = 0; m < a.size(); ++m) {
                double expo = static_cast<double>(m) - static_cast<double>(s[static_cast<std::size_t>(i)]);
                if (expo == 0.0) continue;
                acc += a[m][static_cast<std::size_t>(i)] * expo * std::pow(z, Scalar(expo - 1.0));
            }
            dw[static_cast<std::size_t>(i)] = acc;
        }
        return dw;
    }
};

inline NumericSeries instantiate(const LaurentSolution& sol,
                                 const std::map<std::string, Scalar>& assignment) {
    NumericSeries out;
    out.s = sol.s;
    out.a.assign(sol.coeff.size(), std::vector<Scalar>(static_cast<std::size_t>(sol.n()), Scalar(0.0)));
    for (std::size_t m = 0; m < sol.coeff.size(); ++m)
        for (int i = 0; i < sol.n(); ++i)
            out.a[m][static_cast<std::size_t>(i)] = sol.coeff[m][static_cast<std::size_t>(i)].eval(assignment);
    return out;
}

// Largest ODE defect max_i |w_i'(z) - f_i(w(z))| of the truncated series over
// sample points on the circle |z| = radius. Small radii expose truncation
// error of order radius^{N - max s}.
inline double series_residual(const SystemSpec& spec, const NumericSeries& ns,
                              double radius = 0.05, int samples = 8) {
    double worst = 0.0;
    for (int t = 0; t < samples; ++t) {
        double phi = 2.0 * 3.14159265358979323846 * (static_cast<double>(t) + 0.37)
                     / static_cast<double>(samples);
        Scalar z = std::polar(radius, phi);
        auto w = ns.eval(z);
        auto dw = ns.eval_derivative(z);
        for (int i = 0; i < ns.n(); ++i) {
            Scalar fi = spec.rhs[static_cast<std::size_t>(i)].eval(w);
            worst = std::max(worst, std::abs(dw[static_cast<std::size_t>(i)] - fi));
        }
    }
    return worst;
}

}  // namespace qhode

#endif  // QHODE_LAURENT_HPP
