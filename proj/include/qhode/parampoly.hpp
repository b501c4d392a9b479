// qhode/parampoly.hpp
//
// Polynomials in named free parameters with complex coefficients. These are
// the coefficient objects of Laurent series: once a resonance introduces a
// free parameter, every later series coefficient is a ParamPoly in the
// parameters introduced so far. Each ParamPoly carries its own sorted list of
// parameter names; binary operations take the union and remap exponents, so
// values created at different expansion depths combine freely.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_PARAMPOLY_HPP
#define QHODE_PARAMPOLY_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/poly.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

class ParamPoly {
public:
    using TermMap = std::map<Exponents, Scalar, GrlexLess>;

    ParamPoly() = default;

    static ParamPoly constant(const Scalar& c) {
        ParamPoly p;
        p.add_term({}, c);
        return p;
    }

    static ParamPoly parameter(const std::string& name, const Scalar& coeff = Scalar(1.0)) {
        ParamPoly p;
        p.params_.push_back(name);
        p.add_term({1}, coeff);
        return p;
    }

    // Zero polynomial over a fixed (already sorted) parameter list; lets
    // callers assemble terms whose exponents refer to that list directly.
    static ParamPoly with_params(std::vector<std::string> names) {
        ParamPoly p;
        p.params_ = std::move(names);
        return p;
    }

    const std::vector<std::string>& params() const { return params_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero(double tol = 0.0) const {
        if (tol <= 0.0) return terms_.empty();
        for (const auto& [e, c] : terms_)
            if (std::abs(c) > tol) return false;
        return true;
    }
    bool is_constant() const {
        return terms_.empty()
            || (terms_.size() == 1 && PhasePoly::total_degree(terms_.begin()->first) == 0);
    }

    Scalar constant_value() const {
        Exponents zero(params_.size(), 0);
        auto it = terms_.find(zero);
        return it == terms_.end() ? Scalar(0.0) : it->second;
    }

    double max_coeff_modulus() const {
        double m = 0.0;
        for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, PhasePoly::total_degree(e));
        return d;
    }

    void add_term(const Exponents& e, const Scalar& c) {
        if (e.size() != params_.size())
            throw dimension_mismatch("parameter monomial has wrong arity");
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) <= kCoeffPrune) terms_.erase(it);
    }

    friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
        auto [ra, rb] = aligned(a, b);
        for (const auto& [e, c] : rb.terms_) ra.add_term(e, c);
        return ra;
    }
    friend ParamPoly operator-(const ParamPoly& a, const ParamPoly& b) {
        auto [ra, rb] = aligned(a, b);
        for (const auto& [e, c] : rb.terms_) ra.add_term(e, -c);
        return ra;
    }
    friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
        auto [ra, rb] = aligned(a, b);
        ParamPoly out;
        out.params_ = ra.params_;
        for (const auto& [ea, ca] : ra.terms_) {
            for (const auto& [eb, cb] : rb.terms_) {
                Exponents e(ea);
                for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }
    friend ParamPoly operator*(const ParamPoly& a, const Scalar& s) {
        ParamPoly out;
        out.params_ = a.params_;
        for (const auto& [e, c] : a.terms_) out.add_term(e, c * s);
        return out;
    }
    friend ParamPoly operator*(const Scalar& s, const ParamPoly& a) { return a * s; }
    friend ParamPoly operator-(const ParamPoly& a) { return a * Scalar(-1.0); }
    ParamPoly& operator+=(const ParamPoly& o) { return *this = *this + o; }
    ParamPoly& operator-=(const ParamPoly& o) { return *this = *this - o; }
    ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }

    bool almost_equal_to(const ParamPoly& o, double tol) const {
        return (*this - o).is_zero(tol);
    }

    // Evaluate with the assignment name -> value; parameters missing from the
    // assignment make the evaluation fail loudly rather than default to zero.
    Scalar eval(const std::map<std::string, Scalar>& assignment) const {
        std::vector<Scalar> vals(params_.size());
        for (std::size_t j = 0; j < params_.size(); ++j) {
            auto it = assignment.find(params_[j]);
            if (it == assignment.end())
                throw semantic_error("no value assigned to parameter '" + params_[j] + "'");
            vals[j] = it->second;
        }
        Scalar acc(0.0);
        for (const auto& [e, c] : terms_) {
            Scalar t = c;
            for (std::size_t j = 0; j < e.size(); ++j)
                for (int r = 0; r < e[j]; ++r) t *= vals[j];
            acc += t;
        }
        return acc;
    }

    // Substitute a subset of parameters by numeric values, keeping the rest.
    ParamPoly substitute(const std::map<std::string, Scalar>& assignment) const {
        ParamPoly out;
        for (const auto& name : params_)
            if (!assignment.count(name)) out.params_.push_back(name);
        for (const auto& [e, c] : terms_) {
            Scalar coeff = c;
            Exponents kept;
            kept.reserve(out.params_.size());
            for (std::size_t j = 0; j < params_.size(); ++j) {
                auto it = assignment.find(params_[j]);
                if (it != assignment.end()) {
                    for (int r = 0; r < e[j]; ++r) coeff *= it->second;
                } else {
                    kept.push_back(e[j]);
                }
            }
            out.add_term(kept, coeff);
        }
        return out;
    }

    std::string to_string() const {
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
                mono += params_[j];
                if (e[j] != 1) mono += "^" + std::to_string(e[j]);
            }
            if (mono.empty()) out += format_scalar(c);
            else if (c == Scalar(1.0)) out += mono;
            else out += format_scalar(c) + "*" + mono;
        }
        return out;
    }

    // Name of the parameter monomial at e, e.g. "beta^2*c4" ("1" for the
    // constant term); used in error witnesses.
    std::string monomial_name(const Exponents& e) const {
        std::string mono;
        for (std::size_t j = 0; j < e.size(); ++j) {
            if (e[j] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += params_[j];
            if (e[j] != 1) mono += "^" + std::to_string(e[j]);
        }
        return mono.empty() ? "1" : mono;
    }

private:
    // Rewrite both operands over the union of their parameter lists.
    static std::pair<ParamPoly, ParamPoly> aligned(const ParamPoly& a, const ParamPoly& b) {
        if (a.params_ == b.params_) return {a, b};
        std::vector<std::string> names(a.params_);
        names.insert(names.end(), b.params_.begin(), b.params_.end());
        std::sort(names.begin(), names.end());
        names.erase(std::unique(names.begin(), names.end()), names.end());
        return {a.remapped(names), b.remapped(names)};
    }

    ParamPoly remapped(const std::vector<std::string>& names) const {
        ParamPoly out;
        out.params_ = names;
        std::vector<std::size_t> where(params_.size());
        for (std::size_t j = 0; j < params_.size(); ++j) {
            auto it = std::lower_bound(names.begin(), names.end(), params_[j]);
            where[j] = static_cast<std::size_t>(it - names.begin());
        }
        for (const auto& [e, c] : terms_) {
            Exponents ne(names.size(), 0);
            for (std::size_t j = 0; j < e.size(); ++j) ne[where[j]] = e[j];
            out.add_term(ne, c);
        }
        return out;
    }

    std::vector<std::string> params_;  // sorted after any binary op; ctor order before
    TermMap terms_;
};

}  // namespace qhode

#endif  // QHODE_PARAMPOLY_HPP
