// qhode/weights.hpp
//
// Quasi-homogeneity detection: find positive integer weights s_1..s_n with
// f_i(a^{s_1} w_1, ..., a^{s_n} w_n) = a^{s_i + 1} f_i(w) for every scaling
// constant a, and the uniqueness determinant
//     Delta(w) = det( w_j df_i/dw_j - delta_ij f_i ),
// whose non-vanishing makes the principal balance coefficients isolated.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_WEIGHTS_HPP
#define QHODE_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qhode/poly.hpp"
#include "qhode/system.hpp"

namespace qhode {

struct WeightVector {
    std::vector<int> s;
    bool unique = false;  // Delta not identically zero
};

namespace detail {

// All monomials of one rhs component share a weighted degree e (numerator)
// and d (denominator), with e - d = s_i + 1. Zero components impose nothing.
inline bool component_scales(const RationalFn& r, const std::vector<int>& s, int si) {
    if (r.num().is_zero()) return true;
    auto homogeneous_degree = [&](const PhasePoly& p) -> std::optional<int> {
        std::optional<int> deg;
        for (const auto& [e, c] : p.terms()) {
            int d = PhasePoly::weighted_degree(e, s);
            if (!deg) deg = d;
            else if (*deg != d) return std::nullopt;
        }
        return deg ? deg : std::optional<int>(0);
    };
    auto e = homogeneous_degree(r.num());
    auto d = homogeneous_degree(r.den());
    if (!e || !d) return false;
    return *e - *d == si + 1;
}

}  // namespace detail

// Exact exponent-bookkeeping form of the scaling identity.
inline bool check_invariance(const SystemSpec& spec, const std::vector<int>& s) {
    if (static_cast<int>(s.size()) != spec.n()) return false;
    for (int si : s)
        if (si < 1) return false;
    for (int i = 0; i < spec.n(); ++i)
        if (!detail::component_scales(spec.rhs[static_cast<std::size_t>(i)], s, s[static_cast<std::size_t>(i)]))
            return false;
    return true;
}

// Search for the weight vector: exhaustive over 1..kWeightSearchMax per
// coordinate (minimal total, then lexicographic) for small n, otherwise a
// rational solve of the monomial linear system. Returns nothing when the
// system is not quasi-homogeneous.
inline std::optional<std::vector<int>> detect_weights(const SystemSpec& spec) {
    constexpr int kWeightSearchMax = 6;
    const int n = spec.n();

    if (n <= 6) {
        std::optional<std::vector<int>> best;
        std::vector<int> s(static_cast<std::size_t>(n), 1);
        auto better = [](const std::vector<int>& a, const std::vector<int>& b) {
            int sa = 0, sb = 0;
            for (int x : a) sa += x;
            for (int x : b) sb += x;
            if (sa != sb) return sa < sb;
            return a < b;
        };
        for (;;) {
            if (check_invariance(spec, s))
                if (!best || better(s, *best)) best = s;
            int j = n - 1;
            while (j >= 0 && s[static_cast<std::size_t>(j)] == kWeightSearchMax) {
                s[static_cast<std::size_t>(j)] = 1;
                --j;
            }
            if (j < 0) break;
            ++s[static_cast<std::size_t>(j)];
        }
        return best;
    }

    // Larger systems: one anchor row per component plus degree-equality rows,
    // solved in double precision and scaled to the smallest integer vector.
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs_vals;
    for (int i = 0; i < n; ++i) {
        const RationalFn& r = spec.rhs[static_cast<std::size_t>(i)];
        if (r.num().is_zero()) continue;
        auto add_rows = [&](const PhasePoly& p, const Exponents** anchor) {
            for (const auto& [e, c] : p.terms()) {
                if (!*anchor) {
                    *anchor = &e;
                    continue;
                }
                Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
                for (int j = 0; j < n; ++j)
                    row(j) = static_cast<double>(e[static_cast<std::size_t>(j)]
                                                 - (**anchor)[static_cast<std::size_t>(j)]);
                rows.push_back(row);
                rhs_vals.push_back(0.0);
            }
        };
        const Exponents* num_anchor = nullptr;
        const Exponents* den_anchor = nullptr;
        add_rows(r.num(), &num_anchor);
        add_rows(r.den(), &den_anchor);
        Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < n; ++j) {
            double a = static_cast<double>((*num_anchor)[static_cast<std::size_t>(j)]);
            double d = den_anchor ? static_cast<double>((*den_anchor)[static_cast<std::size_t>(j)]) : 0.0;
            row(j) = a - d;
        }
        row(i) -= 1.0;
        rows.push_back(row);
        rhs_vals.push_back(1.0);
    }
    if (rows.empty()) return std::nullopt;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), n);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        m.row(static_cast<Eigen::Index>(k)) = rows[k];
        b(static_cast<Eigen::Index>(k)) = rhs_vals[k];
    }
    Eigen::VectorXd sol = m.colPivHouseholderQr().solve(b);
    if ((m * sol - b).norm() > 1e-8) return std::nullopt;
    for (int mult = 1; mult <= 64; ++mult) {
        std::vector<int> s(static_cast<std::size_t>(n));
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            double v = sol(j) * mult;
            int r = static_cast<int>(std::llround(v));
            if (std::abs(v - r) > 1e-6 || r < 1) {
                ok = false;
                break;
            }
            s[static_cast<std::size_t>(j)] = r;
        }
        if (ok && check_invariance(spec, s)) return s;
    }
    return std::nullopt;
}

// det( w_j df_i/dw_j - delta_ij f_i ), exact sparse determinant by Laplace
// expansion along rows with memoization on the remaining-column subset.
inline PhasePoly delta_determinant(const SystemSpec& spec) {
    const int n = spec.n();
    auto f = spec.rhs_polynomials();
    std::vector<std::vector<PhasePoly>> m(static_cast<std::size_t>(n),
                                          std::vector<PhasePoly>(static_cast<std::size_t>(n), PhasePoly(n)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            PhasePoly entry = PhasePoly::variable(n, j) * f[static_cast<std::size_t>(i)].diff(j);
            if (i == j) entry -= f[static_cast<std::size_t>(i)];
            m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(entry);
        }

    std::map<std::uint32_t, PhasePoly> memo;
    // Determinant of the minor on rows (n - |S|)..(n-1) and column set S.
    auto rec = [&](auto&& self, std::uint32_t cols) -> PhasePoly {
        if (cols == 0) return PhasePoly::constant(n, Scalar(1.0));
        auto it = memo.find(cols);
        if (it != memo.end()) return it->second;
        int k = 0;  // popcount
        for (std::uint32_t t = cols; t; t &= t - 1) ++k;
        int row = n - k;
        PhasePoly acc(n);
        int sign = 1;
        for (int j = 0; j < n; ++j) {
            std::uint32_t bit = 1u << j;
            if (!(cols & bit)) continue;
            const PhasePoly& entry = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)];
            if (!entry.is_zero()) {
                PhasePoly sub = self(self, cols & ~bit);
                PhasePoly term = entry * sub;
                if (sign < 0) term = -term;
                acc += term;
            }
            sign = -sign;
        }
        memo.emplace(cols, acc);
        return acc;
    };
    return rec(rec, (n >= 32) ? 0xffffffffu : ((1u << n) - 1u));
}

// Full quasi-homogeneity record: weights plus the Delta-based uniqueness flag.
inline std::optional<WeightVector> weight_vector(const SystemSpec& spec) {
    auto s = detect_weights(spec);
    if (!s) return std::nullopt;
    WeightVector out;
    out.s = *s;
    out.unique = spec.rhs_is_polynomial() && !delta_determinant(spec).is_zero();
    return out;
}

}  // namespace qhode

#endif  // QHODE_WEIGHTS_HPP
