// qhode/system.hpp
//
// The parsed model of an autonomous ODE system dw/dz = f(w): ordered phase
// variables, rational right-hand sides with numeric constants already bound,
// optional named first integrals, optional Poisson matrix and Hamiltonian.
// Also the structural operations on it: companion-system reduction for a
// single nth-order equation, Hamiltonian vector fields, and the Poisson
// audit (antisymmetry, Jacobi, involution, Casimirs) as exact polynomial
// identity checks.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_SYSTEM_HPP
#define QHODE_SYSTEM_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/poly.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

struct SystemSpec {
    std::string name;
    std::vector<std::string> vars;                          // ordered phase variables
    std::vector<std::pair<std::string, Scalar>> consts;     // bound at parse time
    std::vector<RationalFn> rhs;                            // dw_i/dz = rhs[i]
    std::vector<std::pair<std::string, PhasePoly>> integrals;
    std::optional<std::vector<std::vector<PhasePoly>>> poisson;
    std::optional<std::string> hamiltonian;                 // names one integral

    int n() const { return static_cast<int>(vars.size()); }

    bool rhs_is_polynomial() const {
        for (const auto& r : rhs)
            if (!r.is_polynomial()) return false;
        return true;
    }

    std::vector<PhasePoly> rhs_polynomials() const {
        std::vector<PhasePoly> out;
        out.reserve(rhs.size());
        for (const auto& r : rhs) out.push_back(r.as_polynomial());
        return out;
    }

    const PhasePoly& integral(const std::string& nm) const {
        for (const auto& [k, v] : integrals)
            if (k == nm) return v;
        throw semantic_error("no integral named '" + nm + "'");
    }

    bool has_integral(const std::string& nm) const {
        for (const auto& [k, v] : integrals)
            if (k == nm) return true;
        return false;
    }
};

// w^(n) = f(w, w', ..., w^(n-1)) as a companion first-order system
// v1' = v2, ..., v_{n-1}' = v_n, v_n' = f(v1..vn). `f` must already be
// expressed over the n companion variables.
inline SystemSpec reduce_nth_order(const std::string& base_name, int order,
                                   const std::vector<std::string>& companion_vars,
                                   const RationalFn& f) {
    if (order < 2) throw semantic_error("companion reduction needs order >= 2");
    if (static_cast<int>(companion_vars.size()) != order)
        throw dimension_mismatch("companion variable list has wrong length");
    if (f.arity() != order)
        throw dimension_mismatch("top-derivative function has wrong arity");
    SystemSpec out;
    out.name = base_name;
    out.vars = companion_vars;
    for (int k = 0; k + 1 < order; ++k)
        out.rhs.emplace_back(PhasePoly::variable(order, k + 1));
    out.rhs.push_back(f);
    return out;
}

// f = J dH/dw for a polynomial Hamiltonian and polynomial Poisson matrix.
inline std::vector<PhasePoly> hamiltonian_to_field(const SystemSpec& spec,
                                                   const PhasePoly& h) {
    if (!spec.poisson) throw missing_poisson();
    const auto& J = *spec.poisson;
    int n = spec.n();
    std::vector<PhasePoly> grad;
    grad.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) grad.push_back(h.diff(j));
    std::vector<PhasePoly> field;
    field.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        PhasePoly fi(n);
        for (int j = 0; j < n; ++j) fi += J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * grad[static_cast<std::size_t>(j)];
        field.push_back(fi);
    }
    return field;
}

// Poisson bracket {g, h} = sum_ij J_ij dg/dw_i dh/dw_j.
inline PhasePoly poisson_bracket(const SystemSpec& spec, const PhasePoly& g,
                                 const PhasePoly& h) {
    if (!spec.poisson) throw missing_poisson();
    const auto& J = *spec.poisson;
    int n = spec.n();
    PhasePoly out(n);
    for (int i = 0; i < n; ++i) {
        PhasePoly gi = g.diff(i);
        if (gi.is_zero()) continue;
        for (int j = 0; j < n; ++j) {
            const PhasePoly& Jij = J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (Jij.is_zero()) continue;
            PhasePoly hj = h.diff(j);
            if (hj.is_zero()) continue;
            out += Jij * gi * hj;
        }
    }
    return out;
}

// Lie derivative of g along the (polynomial) vector field.
inline PhasePoly lie_derivative(const std::vector<PhasePoly>& field, const PhasePoly& g) {
    int n = static_cast<int>(field.size());
    PhasePoly out(n);
    for (int j = 0; j < n; ++j) out += g.diff(j) * field[static_cast<std::size_t>(j)];
    return out;
}

struct PoissonReport {
    bool has_poisson = false;
    bool antisymmetric = false;
    bool jacobi_ok = false;
    double max_jacobi_residual = 0.0;
    // For each declared integral: is J dH_i/dw identically zero?
    std::vector<std::pair<std::string, bool>> casimir;
    // For each unordered pair of integrals: does {H_i, H_j} vanish?
    std::vector<std::pair<std::string, bool>> involution;
    // If a Hamiltonian is declared: does J dH/dw reproduce the stated rhs?
    std::optional<bool> field_matches_rhs;
    bool all_ok() const {
        if (!has_poisson || !antisymmetric || !jacobi_ok) return false;
        for (const auto& [k, v] : involution)
            if (!v) return false;
        if (field_matches_rhs && !*field_matches_rhs) return false;
        return true;
    }
};

// Exact structural audit of the declared Poisson matrix. `tol` absorbs the
// floating-point fuzz of coefficient arithmetic; the identities themselves
// are polynomial.
inline PoissonReport poisson_audit(const SystemSpec& spec, double tol = 1e-10) {
    PoissonReport rep;
    if (!spec.poisson) throw missing_poisson();
    rep.has_poisson = true;
    const auto& J = *spec.poisson;
    int n = spec.n();

    rep.antisymmetric = true;
    for (int i = 0; i < n && rep.antisymmetric; ++i)
        for (int j = 0; j < n && rep.antisymmetric; ++j)
            if (!(J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]
                  + J[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]).almost_equal_to(PhasePoly(n), tol))
                rep.antisymmetric = false;

    // Jacobi identity on coordinate triples:
    // sum_a ( J_ak d J_ij/dw_a + J_ai d J_jk/dw_a + J_aj d J_ki/dw_a ) = 0.
    rep.jacobi_ok = true;
    auto jacobi_term = [&](int i, int j, int k) {
        PhasePoly acc(n);
        for (int a = 0; a < n; ++a)
            acc += J[static_cast<std::size_t>(a)][static_cast<std::size_t>(k)]
                 * J[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].diff(a);
        return acc;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                PhasePoly s = jacobi_term(i, j, k) + jacobi_term(j, k, i) + jacobi_term(k, i, j);
                rep.max_jacobi_residual = std::max(rep.max_jacobi_residual, s.max_coeff_modulus());
                if (!s.almost_equal_to(PhasePoly(n), tol)) rep.jacobi_ok = false;
            }

    for (const auto& [nm, h] : spec.integrals) {
        auto field = hamiltonian_to_field(spec, h);
        bool casimir = true;
        for (const auto& fi : field)
            if (!fi.almost_equal_to(PhasePoly(n), tol)) casimir = false;
        rep.casimir.emplace_back(nm, casimir);
    }

    for (std::size_t a = 0; a < spec.integrals.size(); ++a)
        for (std::size_t b = a + 1; b < spec.integrals.size(); ++b) {
            PhasePoly br = poisson_bracket(spec, spec.integrals[a].second, spec.integrals[b].second);
            rep.involution.emplace_back(
                "{" + spec.integrals[a].first + "," + spec.integrals[b].first + "}",
                br.almost_equal_to(PhasePoly(n), tol));
        }

    if (spec.hamiltonian) {
        if (!spec.has_integral(*spec.hamiltonian))
            throw semantic_error("declared hamiltonian '" + *spec.hamiltonian
                                 + "' is not an integral");
        auto field = hamiltonian_to_field(spec, spec.integral(*spec.hamiltonian));
        bool match = spec.rhs_is_polynomial();
        if (match) {
            auto frhs = spec.rhs_polynomials();
            for (int i = 0; i < n; ++i)
                if (!field[static_cast<std::size_t>(i)].almost_equal_to(frhs[static_cast<std::size_t>(i)], tol))
                    match = false;
        }
        rep.field_matches_rhs = match;
    }
    return rep;
}

}  // namespace qhode

#endif  // QHODE_SYSTEM_HPP
