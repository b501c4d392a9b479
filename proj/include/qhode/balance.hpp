// qhode/balance.hpp
//
// Balances of a quasi-homogeneous system: nonzero solutions c of
//     s_i c_i + f_i(c) = 0,  i = 1..n,
// the leading Laurent coefficients of candidate pole-like solutions
// w_i = c_i z^{-s_i} (1 + ...). Solved by damped Newton iteration from many
// random starting points, followed by deduplication. Rank-deficient
// Jacobians signal one-parameter families; those are detected, modeled as
// affine lines c(a) = base + a*dir, and certified symbolically by checking
// that the balance equations vanish identically along the line.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_BALANCE_HPP
#define QHODE_BALANCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "qhode/linalg.hpp"
#include "qhode/parampoly.hpp"
#include "qhode/poly.hpp"
#include "qhode/rng.hpp"
#include "qhode/system.hpp"

namespace qhode {

struct BalanceOptions {
    int starts = 200;
    std::uint64_t seed = 0x51ab70de0ddc0de5ull;
    int max_iter = 60;
    double converge_tol = 1e-12;
    double verify_tol = 1e-9;
    double dedupe_tol = 1e-6;
    double start_modulus_lo = 0.3;
    double start_modulus_hi = 2.0;
};

struct Balance {
    Vector c0;            // representative point (for a family: base + dir, i.e. a = 1... see below)
    double residual = 0.0;
    bool continuum = false;
    // Family data (continuum only): points are base + a*dir, where dir is
    // normalized to dir[pivot] = 1, base[pivot] = 0, so the parameter a IS
    // the pivot coordinate of the point.
    Vector base;
    Vector dir;
    int pivot = -1;

    Vector at(const Scalar& a) const {
        if (!continuum) return c0;
        return base + a * dir;
    }
};

// A family balance with its line parameter fixed to a number: the returned
// balance keeps the family data (so the census still counts the line
// parameter) but exposes the pinned point as its representative.
inline Balance pin_family(const Balance& b, const Scalar& a) {
    Balance out = b;
    out.c0 = b.at(a);
    return out;
}

namespace detail {

inline Vector balance_g(const SystemSpec& spec, const std::vector<int>& s, const Vector& c) {
    auto pt = from_vector(c);
    Vector g(spec.n());
    for (int i = 0; i < spec.n(); ++i)
        g(i) = static_cast<double>(s[static_cast<std::size_t>(i)]) * c(i)
               + spec.rhs[static_cast<std::size_t>(i)].eval(pt);
    return g;
}

inline Matrix balance_jacobian(const SystemSpec& spec, const std::vector<int>& s, const Vector& c) {
    auto pt = from_vector(c);
    Matrix j = Matrix::Zero(spec.n(), spec.n());
    for (int i = 0; i < spec.n(); ++i) {
        for (int k = 0; k < spec.n(); ++k) {
            RationalFn d = spec.rhs[static_cast<std::size_t>(i)].diff(k);
            j(i, k) = d.eval(pt);
        }
        j(i, i) += static_cast<double>(s[static_cast<std::size_t>(i)]);
    }
    return j;
}

// Index of the entry of largest modulus, ties (within a relative margin)
// resolved toward the lowest index.
inline int pivot_index(const Vector& v) {
    double best = 0.0;
    for (int j = 0; j < v.size(); ++j) best = std::max(best, std::abs(v(j)));
    for (int j = 0; j < v.size(); ++j)
        if (std::abs(v(j)) >= best * (1.0 - 1e-6)) return j;
    return 0;
}

// Distance from p to the affine complex line base + t*dir (minimized over t).
inline double line_distance(const Vector& base, const Vector& dir, const Vector& p) {
    Vector d = p - base;
    Scalar t = dir.dot(d) / dir.dot(dir);  // Eigen dot conjugates the left factor
    return (d - t * dir).template lpNorm<Eigen::Infinity>();
}

// Certify that g(base + a*dir) is identically zero in the parameter a
// (polynomial right-hand sides only). This promotes a numerically observed
// rank deficiency to an exact one-parameter family.
inline bool certify_line(const SystemSpec& spec, const std::vector<int>& s,
                         const Vector& base, const Vector& dir, double tol) {
    if (!spec.rhs_is_polynomial()) return false;
    int n = spec.n();
    std::vector<ParamPoly> point;
    point.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        ParamPoly pj = ParamPoly::constant(base(j)) + ParamPoly::parameter("a", dir(j));
        point.push_back(pj);
    }
    ParamPoly one = ParamPoly::constant(Scalar(1.0));
    auto f = spec.rhs_polynomials();
    for (int i = 0; i < n; ++i) {
        ParamPoly gi = f[static_cast<std::size_t>(i)].eval_generic<ParamPoly>(point, one)
                       + point[static_cast<std::size_t>(i)] * Scalar(static_cast<double>(s[static_cast<std::size_t>(i)]));
        if (!gi.is_zero(tol)) return false;
    }
    return true;
}

}  // namespace detail

// Multistart damped Newton search for all balances. Points whose Jacobian
// diag(s) + Df(c) is rank-deficient are grouped into certified affine
// families; the rest are reported as isolated balances. The zero solution is
// always discarded. Results are deterministic for a fixed seed and sorted
// canonically (families first, then by rounded coordinates).
inline std::vector<Balance> solve_balances(const SystemSpec& spec, const std::vector<int>& s,
                                           const BalanceOptions& opt = {}) {
    const int n = spec.n();
    Rng rng(opt.seed);
    std::vector<Balance> lines;
    std::vector<Vector> points;

    auto try_absorb_into_line = [&](const Vector& c) {
        for (const auto& l : lines)
            if (detail::line_distance(l.base, l.dir, c) < opt.dedupe_tol) return true;
        return false;
    };

    for (int trial = 0; trial < opt.starts; ++trial) {
        Vector c(n);
        for (int j = 0; j < n; ++j)
            c(j) = rng.complex_annulus(opt.start_modulus_lo, opt.start_modulus_hi);

        bool converged = false;
        double gnorm = 0.0;
        for (int it = 0; it < opt.max_iter; ++it) {
            Vector g;
            try {
                g = detail::balance_g(spec, s, c);
            } catch (const division_by_zero&) {
                break;  // start landed on a denominator zero; abandon it
            }
            gnorm = g.template lpNorm<Eigen::Infinity>();
            if (!g.allFinite()) break;
            if (gnorm < opt.converge_tol) {
                converged = true;
                break;
            }
            Matrix j;
            try {
                j = detail::balance_jacobian(spec, s, c);
            } catch (const division_by_zero&) {
                break;
            }
            auto sp = svd_spaces(j);
            Vector step = pinv_solve(sp, -g);
            // Damped update: halve until the residual decreases.
            double lambda = 1.0;
            bool moved = false;
            for (int h = 0; h < 10; ++h) {
                Vector cand = c + lambda * step;
                try {
                    Vector gc = detail::balance_g(spec, s, cand);
                    if (gc.allFinite() && gc.template lpNorm<Eigen::Infinity>() < gnorm) {
                        c = cand;
                        moved = true;
                        break;
                    }
                } catch (const division_by_zero&) {
                    // shrink and retry
                }
                lambda *= 0.5;
            }
            if (!moved) break;
        }
        if (!converged) continue;
        // Two polishing steps sharpen the point to machine precision.
        for (int polish = 0; polish < 2; ++polish) {
            try {
                Vector g = detail::balance_g(spec, s, c);
                Matrix j = detail::balance_jacobian(spec, s, c);
                auto sp = svd_spaces(j);
                c += pinv_solve(sp, -g);
            } catch (const division_by_zero&) {
                break;
            }
        }
        try {
            gnorm = detail::balance_g(spec, s, c).template lpNorm<Eigen::Infinity>();
        } catch (const division_by_zero&) {
            continue;
        }
        if (gnorm > opt.verify_tol) continue;
        if (c.template lpNorm<Eigen::Infinity>() < 1e-8) continue;  // trivial zero balance
        if (try_absorb_into_line(c)) continue;

        Matrix j;
        try {
            j = detail::balance_jacobian(spec, s, c);
        } catch (const division_by_zero&) {
            continue;
        }
        auto sp = svd_spaces(j);
        bool made_line = false;
        if (sp.rank < n && sp.right_nullspace.cols() == 1) {
            Vector v = sp.right_nullspace.col(0);
            int piv = detail::pivot_index(v);
            Vector dir = v / v(piv);
            Vector base = c - c(piv) * dir;
            if (detail::certify_line(spec, s, base, dir, 1e-8)) {
                Balance b;
                b.continuum = true;
                b.base = base;
                b.dir = dir;
                b.pivot = piv;
                b.c0 = base + dir;  // representative at a = 1
                b.residual = gnorm;
                lines.push_back(std::move(b));
                made_line = true;
                // A new line may retroactively absorb earlier isolated points.
                std::vector<Vector> kept;
                for (const auto& p : points)
                    if (!try_absorb_into_line(p)) kept.push_back(p);
                points.swap(kept);
            }
        }
        if (!made_line) {
            bool dup = false;
            for (const auto& p : points)
                if ((p - c).template lpNorm<Eigen::Infinity>() < opt.dedupe_tol) dup = true;
            if (!dup) points.push_back(c);
        }
    }

    std::vector<Balance> out;
    for (auto& l : lines) out.push_back(std::move(l));
    for (auto& p : points) {
        Balance b;
        b.c0 = p;
        try {
            b.residual = detail::balance_g(spec, s, p).template lpNorm<Eigen::Infinity>();
        } catch (const division_by_zero&) {
            b.residual = std::numeric_limits<double>::infinity();
        }
        out.push_back(std::move(b));
    }

    auto key = [](const Balance& b) {
        std::vector<double> k;
        k.push_back(b.continuum ? 0.0 : 1.0);
        const Vector& v1 = b.continuum ? b.base : b.c0;
        auto push = [&](const Vector& v) {
            for (int j = 0; j < v.size(); ++j) {
                k.push_back(std::round(v(j).real() * 1e8) / 1e8);
                k.push_back(std::round(v(j).imag() * 1e8) / 1e8);
            }
        };
        push(v1);
        if (b.continuum) push(b.dir);
        return k;
    };
    std::sort(out.begin(), out.end(),
              [&](const Balance& a, const Balance& b) { return key(a) < key(b); });
    if (out.empty())
        throw no_balance_found("no nonzero balance converged from "
                               + std::to_string(opt.starts)
                               + " starts; the system likely has no pole-type "
                                 "solutions for these weights");
    return out;
}

}  // namespace qhode

#endif  // QHODE_BALANCE_HPP
