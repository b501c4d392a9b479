// qhode/poly.hpp
//
// Sparse multivariate polynomials over complex<double> ("phase polynomials":
// the indeterminates are the phase-space coordinates of an ODE system), plus
// the rational-function pair built from them. Monomials are kept in a map
// ordered graded-lexicographically, which fixes a canonical iteration order
// for printing and serialization. Coefficients with modulus below kCoeffPrune
// are dropped after every ring operation, so "no term" and "zero term" stay
// the same thing.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_POLY_HPP
#define QHODE_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

using Exponents = std::vector<int>;

// Graded-lexicographic order: first by total degree, then lexicographically.
struct GrlexLess {
    bool operator()(const Exponents& a, const Exponents& b) const {
        int da = std::accumulate(a.begin(), a.end(), 0);
        int db = std::accumulate(b.begin(), b.end(), 0);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

class PhasePoly {
public:
    using TermMap = std::map<Exponents, Scalar, GrlexLess>;

    PhasePoly() : arity_(0) {}
    explicit PhasePoly(int arity) : arity_(arity) {}

    static PhasePoly constant(int arity, const Scalar& c) {
        PhasePoly p(arity);
        p.add_term(Exponents(static_cast<std::size_t>(arity), 0), c);
        return p;
    }

    static PhasePoly variable(int arity, int index) {
        PhasePoly p(arity);
        Exponents e(static_cast<std::size_t>(arity), 0);
        e[static_cast<std::size_t>(index)] = 1;
        p.add_term(e, Scalar(1.0));
        return p;
    }

    static PhasePoly monomial(int arity, const Exponents& e, const Scalar& c) {
        PhasePoly p(arity);
        p.add_term(e, c);
        return p;
    }

    int arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && total_degree(terms_.begin()->first) == 0;
    }

    Scalar constant_value() const {
        Exponents zero(static_cast<std::size_t>(arity_), 0);
        auto it = terms_.find(zero);
        return it == terms_.end() ? Scalar(0.0) : it->second;
    }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
        return d;
    }

    // Accumulate c into the monomial e, pruning the entry if it cancels out.
    void add_term(const Exponents& e, const Scalar& c) {
        if (static_cast<int>(e.size()) != arity_)
            throw dimension_mismatch("monomial exponent vector has wrong arity");
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) <= kCoeffPrune) terms_.erase(it);
    }

    PhasePoly& operator+=(const PhasePoly& o) {
        check_same_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    PhasePoly& operator-=(const PhasePoly& o) {
        check_same_arity(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend PhasePoly operator+(PhasePoly a, const PhasePoly& b) { return a += b; }
    friend PhasePoly operator-(PhasePoly a, const PhasePoly& b) { return a -= b; }

    friend PhasePoly operator*(const PhasePoly& a, const PhasePoly& b) {
        a.check_same_arity(b);
        PhasePoly out(a.arity_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    PhasePoly& operator*=(const PhasePoly& o) { return *this = *this * o; }

    friend PhasePoly operator*(const PhasePoly& a, const Scalar& s) {
        PhasePoly out(a.arity_);
        for (const auto& [e, c] : a.terms_) out.add_term(e, c * s);
        return out;
    }
    friend PhasePoly operator*(const Scalar& s, const PhasePoly& a) { return a * s; }
    friend PhasePoly operator-(const PhasePoly& a) { return a * Scalar(-1.0); }

    PhasePoly pow(int k) const {
        if (k < 0) throw semantic_error("negative power of a polynomial");
        PhasePoly acc = constant(arity_, Scalar(1.0));
        PhasePoly base = *this;
        while (k > 0) {
            if (k & 1) acc = acc * base;
            base = (k >>= 1) ? base * base : base;
        }
        return acc;
    }

    // Evaluation over any commutative ring V that supports v*v, v+v, v*Scalar
    // and has a multiplicative identity `one`. Monomial powers are cached per
    // variable so each distinct exponent is built once.
    template <class V>
    V eval_generic(const std::vector<V>& point, const V& one) const {
        if (static_cast<int>(point.size()) != arity_)
            throw dimension_mismatch("evaluation point has wrong arity");
        std::vector<std::vector<V>> powers(point.size());
        for (std::size_t j = 0; j < point.size(); ++j) powers[j].push_back(one);
        V acc = one * Scalar(0.0);
        for (const auto& [e, c] : terms_) {
            V term = one;
            for (std::size_t j = 0; j < point.size(); ++j) {
                int k = e[j];
                if (k == 0) continue;
                auto& cache = powers[j];
                while (static_cast<int>(cache.size()) <= k)
                    cache.push_back(cache.back() * point[j]);
                term = term * cache[static_cast<std::size_t>(k)];
            }
            acc = acc + term * c;
        }
        return acc;
    }

    Scalar eval(const std::vector<Scalar>& point) const {
        return eval_generic<Scalar>(point, Scalar(1.0));
    }

    // d/dw_j, exact.
    PhasePoly diff(int j) const {
        PhasePoly out(arity_);
        for (const auto& [e, c] : terms_) {
            int k = e[static_cast<std::size_t>(j)];
            if (k == 0) continue;
            Exponents d(e);
            d[static_cast<std::size_t>(j)] -= 1;
            out.add_term(d, c * static_cast<double>(k));
        }
        return out;
    }

    // Iterated partial derivative d^alpha / dw^alpha.
    PhasePoly diff_multi(const Exponents& alpha) const {
        PhasePoly out = *this;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (int r = 0; r < alpha[j]; ++r) out = out.diff(static_cast<int>(j));
        return out;
    }

    bool almost_equal_to(const PhasePoly& o, double tol) const {
        if (arity_ != o.arity_) return false;
        PhasePoly d = *this - o;
        for (const auto& [e, c] : d.terms_)
            if (std::abs(c) > tol) return false;
        return true;
    }

    double max_coeff_modulus() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    // Weighted degree of every monomial must agree for quasi-homogeneity
    // bookkeeping; callers use the per-monomial view through terms().
    static int total_degree(const Exponents& e) {
        return std::accumulate(e.begin(), e.end(), 0);
    }

    static int weighted_degree(const Exponents& e, const std::vector<int>& weights) {
        int d = 0;
        for (std::size_t j = 0; j < e.size(); ++j) d += e[j] * weights[j];
        return d;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            std::string mono;
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (e[j] == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names[j];
                if (e[j] != 1) mono += "^" + std::to_string(e[j]);
            }
            if (mono.empty()) {
                out += format_scalar(c);
            } else if (c == Scalar(1.0)) {
                out += mono;
            } else {
                out += format_scalar(c) + "*" + mono;
            }
        }
        return out;
    }

private:
    void check_same_arity(const PhasePoly& o) const {
        if (arity_ != o.arity_)
            throw dimension_mismatch("polynomial arity mismatch");
    }

    int arity_;
    TermMap terms_;
};

inline double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

inline double multi_factorial(const Exponents& alpha) {
    double f = 1.0;
    for (int a : alpha) f *= factorial(a);
    return f;
}

// Numerator/denominator pair. The denominator is the constant 1 unless the
// source expression genuinely divided by a phase-dependent quantity; no
// gcd cancellation is attempted (factorization is out of scope).
class RationalFn {
public:
    RationalFn() = default;
    explicit RationalFn(PhasePoly num)
        : num_(std::move(num)), den_(PhasePoly::constant(num_.arity(), Scalar(1.0))) {}
    RationalFn(PhasePoly num, PhasePoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw division_by_zero("rational function with zero denominator");
        normalize();
    }

    const PhasePoly& num() const { return num_; }
    const PhasePoly& den() const { return den_; }
    int arity() const { return num_.arity(); }
    bool is_polynomial() const { return den_.is_constant(); }
    bool is_zero() const { return num_.is_zero(); }

    // When the denominator is constant, fold it into the numerator so
    // downstream code can treat the value as a plain polynomial.
    const PhasePoly& as_polynomial() const {
        if (!is_polynomial())
            throw semantic_error("rational function has a non-constant denominator");
        return num_;
    }

    friend RationalFn operator+(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator-(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFn operator*(const RationalFn& a, const RationalFn& b) {
        return RationalFn(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFn operator/(const RationalFn& a, const RationalFn& b) {
        if (b.num_.is_zero()) throw division_by_zero("division by the zero function");
        return RationalFn(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend RationalFn operator-(const RationalFn& a) {
        return RationalFn(-a.num_, a.den_);
    }

    RationalFn pow(int k) const {
        if (k >= 0) return RationalFn(num_.pow(k), den_.pow(k));
        if (num_.is_zero()) throw division_by_zero("negative power of the zero function");
        return RationalFn(den_.pow(-k), num_.pow(-k));
    }

    Scalar eval(const std::vector<Scalar>& point, double tol = 1e-12) const {
        Scalar d = den_.eval(point);
        if (std::abs(d) < tol)
            throw division_by_zero("denominator vanishes at evaluation point");
        return num_.eval(point) / d;
    }

    // Quotient rule, exact.
    RationalFn diff(int j) const {
        return RationalFn(num_.diff(j) * den_ - num_ * den_.diff(j), den_ * den_);
    }

private:
    void normalize() {
        if (den_.is_constant()) {
            Scalar c = den_.constant_value();
            num_ = num_ * (Scalar(1.0) / c);
            den_ = PhasePoly::constant(num_.arity(), Scalar(1.0));
        }
    }

    PhasePoly num_;
    PhasePoly den_;
};

}  // namespace qhode

#endif  // QHODE_POLY_HPP
