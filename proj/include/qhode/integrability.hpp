// qhode/integrability.hpp
//
// Algebraic-integrability diagnostics on a Laurent family:
//   * constancy — composing a first integral H with the family must produce
//     a series with no negative powers (H is constant on each solution);
//   * divisor constraints — the z^0 coefficient of each H_i as a polynomial
//     in the free parameters; fixing the integral values cuts out the
//     (pole) divisor in parameter space;
//   * the free-parameter census (a principal family of an algebraically
//     completely integrable system carries n-1 parameters besides the pole
//     position);
//   * embedding data — the z^{-1} coefficients of a list of observables
//     (equivalently lim t * f_j along the pole), the coordinates classical
//     embeddings of the divisor are written in;
//   * the quartic divisor identity of the heavy-top family, verified
//     numerically per parameter draw after gauge-fixing by the scaling
//     symmetry.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_INTEGRABILITY_HPP
#define QHODE_INTEGRABILITY_HPP

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/laurent.hpp"
#include "qhode/linalg.hpp"
#include "qhode/parampoly.hpp"
#include "qhode/poly.hpp"
#include "qhode/system.hpp"

namespace qhode {

struct ConstancyReport {
    std::string name;
    bool constant = false;
    double max_negative_modulus = 0.0;  // worst coefficient among orders < 0
    ParamPoly z0;                       // the z^0 coefficient
};

// Compose H with the family and demand that every negative order vanishes
// identically in the parameters. Throws not_constant with the offending
// order/monomial when H fails to be an integral (or the series is junk).
inline ConstancyReport integral_constancy(const LaurentSolution& sol, const PhasePoly& h,
                                          const std::string& name = "H",
                                          double tol = 1e-8) {
    ComposedLaurent cl = compose_series(sol, h);
    if (!cl.in_range(0))
        throw not_expanded_far_enough("series order " + std::to_string(sol.order)
                                      + " too small to reach z^0 of '" + name + "'");
    ConstancyReport rep;
    rep.name = name;
    for (int m = cl.low; m < 0; ++m) {
        const ParamPoly& c = cl.at(m);
        rep.max_negative_modulus = std::max(rep.max_negative_modulus, c.max_coeff_modulus());
        if (!c.is_zero(tol)) {
            // Identify the worst monomial for the error witness.
            Exponents worst;
            double worst_mod = 0.0;
            for (const auto& [e, v] : c.terms())
                if (std::abs(v) > worst_mod) {
                    worst_mod = std::abs(v);
                    worst = e;
                }
            throw not_constant(m, c.monomial_name(worst), worst_mod);
        }
    }
    rep.constant = true;
    rep.z0 = cl.at(0);
    return rep;
}

struct DivisorConstraints {
    std::vector<std::string> names;   // integral names, declaration order
    std::vector<ParamPoly> z0;        // p_i(parameters)
    std::vector<std::string> parameters;
};

// The full constraint system {z^0(H_i) = a_i}: one ParamPoly per declared
// integral. Constancy is enforced on the way.
inline DivisorConstraints divisor_constraints(const LaurentSolution& sol,
                                              const SystemSpec& spec,
                                              double tol = 1e-8) {
    DivisorConstraints out;
    for (const auto& [name, h] : spec.integrals) {
        ConstancyReport rep = integral_constancy(sol, h, name, tol);
        out.names.push_back(name);
        out.z0.push_back(rep.z0);
    }
    out.parameters = sol.parameters;
    return out;
}

// Solve a pair of affine constraints {p_i(x, y) = a_i} for the two named
// parameters. Used to invert the divisor map where it is affine (the
// rigid-body case); throws when the constraints are not affine in the pair
// or the 2x2 system is singular.
inline std::map<std::string, Scalar> solve_affine_pair(
    const DivisorConstraints& dc, const std::array<std::string, 2>& params,
    const std::array<Scalar, 2>& values, const std::array<int, 2>& which) {
    Matrix m(2, 2);
    Vector rhs(2);
    for (int r = 0; r < 2; ++r) {
        const ParamPoly& p = dc.z0[static_cast<std::size_t>(which[static_cast<std::size_t>(r)])];
        if (p.degree() > 1)
            throw semantic_error("constraint '" + dc.names[static_cast<std::size_t>(which[static_cast<std::size_t>(r)])]
                                 + "' is not affine in the parameters");
        // Coefficient extraction: constant term and the two linear terms.
        Scalar c0 = p.constant_value();
        for (int col = 0; col < 2; ++col) {
            ParamPoly probe = p + ParamPoly::parameter(params[static_cast<std::size_t>(col)], Scalar(0.0));
            // After alignment the parameter has a slot; read its linear term.
            Scalar lin(0.0);
            const auto& names = probe.params();
            std::size_t slot = names.size();
            for (std::size_t j = 0; j < names.size(); ++j)
                if (names[j] == params[static_cast<std::size_t>(col)]) slot = j;
            for (const auto& [e, v] : probe.terms()) {
                if (PhasePoly::total_degree(e) != 1) continue;
                if (slot < e.size() && e[slot] == 1) lin = v;
            }
            m(r, col) = lin;
        }
        rhs(r) = values[static_cast<std::size_t>(r)] - c0;
    }
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible())
        throw ill_conditioned("affine constraint pair is singular in the chosen parameters");
    Vector sol = lu.solve(rhs);
    return {{params[0], sol(0)}, {params[1], sol(1)}};
}

// z^{-1} coefficient of each observable along the family ("lim t f_j"):
// the embedding coordinates. Deeper poles are an error; observables with no
// pole contribute zero.
inline std::vector<ParamPoly> embedding_point(const LaurentSolution& sol,
                                              const std::vector<PhasePoly>& fs,
                                              double tol = 1e-8) {
    std::vector<ParamPoly> out;
    out.reserve(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        ComposedLaurent cl = compose_series(sol, fs[j]);
        for (int m = cl.low; m < -1 && m <= cl.high; ++m)
            if (!cl.at(m).is_zero(tol))
                throw pole_too_deep(static_cast<int>(j), m);
        if (cl.in_range(-1))
            out.push_back(cl.at(-1));
        else
            out.push_back(ParamPoly());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heavy-top (Kowalewski) divisor identity.

struct KowalewskiDivisorResult {
    Scalar family_sign;   // leading coefficient of the third momentum (+-i)
    Scalar eps_used;      // the epsilon for which the identity held best
    Scalar alpha;         // z^{-1} coefficient of m1 at the draw
    Scalar beta;          // z^{-1} coefficient of gamma3 (after gauge fixing)
    double value = 0.0;   // |identity| at the draw, gauge-fixed
    bool ok = false;
};

// Evaluate the quartic divisor identity
//     beta^4 (alpha^2-1)^2 - (c1 beta^2 - 2 eps c2 beta - 1)(alpha^2-1) + c4
// at one numeric parameter draw. The identity is stated in the gauge where
// the Casimir z^0(H3) equals 1; a draw is moved into that gauge with the
// scaling symmetry (delta = c3^{-1/4}: c1 ~ delta^2, c2 ~ delta^3,
// c3, c4 ~ delta^4, beta ~ delta, alpha invariant). Both signs of eps are
// tried; the family sign is read off the third momentum's leading
// coefficient and reported alongside.
inline KowalewskiDivisorResult verify_kowalewski_divisor(
    const LaurentSolution& sol, const SystemSpec& spec,
    const std::map<std::string, Scalar>& draw, double tol = 1e-6) {
    if (spec.n() != 6 || spec.integrals.size() < 4)
        throw semantic_error("divisor identity requires the six-variable heavy-top system");

    DivisorConstraints dc = divisor_constraints(sol, spec);
    Scalar c1 = dc.z0[0].eval(draw);
    Scalar c2 = dc.z0[1].eval(draw);
    Scalar c3 = dc.z0[2].eval(draw);
    Scalar c4 = dc.z0[3].eval(draw);

    KowalewskiDivisorResult res;
    // alpha: z^{-1} coefficient of m1 = u1(0); beta: z^{-1} coefficient of
    // gamma3 = c_6^{(1)} (the family has c_6^{(0)} = 0).
    res.alpha = sol.coeff[0][0].eval(draw);
    res.family_sign = sol.coeff[0][2].eval(draw);
    Scalar beta_raw = sol.coeff[1][5].eval(draw);

    if (std::abs(res.family_sign - Scalar(0.0, 1.0)) > 1e-6
        && std::abs(res.family_sign - Scalar(0.0, -1.0)) > 1e-6)
        throw family_ambiguous("third-momentum leading coefficient is not +-i");
    if (std::abs(c3) < 1e-12)
        throw invalid_regime("draw lies on c3 = 0; the gauge fixing is singular");

    // Gauge-fix to z^0(H3) = 1.
    Scalar delta = std::pow(c3, Scalar(-0.25));
    Scalar g1 = c1 * delta * delta;
    Scalar g2 = c2 * delta * delta * delta;
    Scalar g4 = c4 * delta * delta * delta * delta;
    res.beta = beta_raw * delta;

    Scalar a2m1 = res.alpha * res.alpha - Scalar(1.0);
    auto identity = [&](const Scalar& eps) {
        return res.beta * res.beta * res.beta * res.beta * a2m1 * a2m1
               - (g1 * res.beta * res.beta - Scalar(2.0) * eps * g2 * res.beta - Scalar(1.0)) * a2m1
               + g4;
    };
    Scalar vp = identity(Scalar(0.0, 1.0));
    Scalar vm = identity(Scalar(0.0, -1.0));
    if (std::abs(vp) <= std::abs(vm)) {
        res.eps_used = Scalar(0.0, 1.0);
        res.value = std::abs(vp);
    } else {
        res.eps_used = Scalar(0.0, -1.0);
        res.value = std::abs(vm);
    }
    res.ok = res.value < tol;
    return res;
}

// The n-1 heuristic: a principal family of an algebraically completely
// integrable system shows n-1 free parameters besides the pole position.
inline bool principal_family_count(const ResonanceInfo& info, int n) {
    return info.family_parameters == n - 1;
}

}  // namespace qhode

#endif  // QHODE_INTEGRABILITY_HPP
