// qhode/report.hpp
//
// Machine-readable JSON reports for the analysis pipeline. Keys are emitted
// in sorted order and floating-point values with shortest round-trip
// formatting, so identical (input, flags, seed) produce byte-identical
// output. No timestamps on purpose.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_REPORT_HPP
#define QHODE_REPORT_HPP

#include <cmath>
#include <string>

#include "json.hpp"

#include "qhode/analysis.hpp"
#include "qhode/scalar.hpp"

namespace qhode {

inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

using json = nlohmann::json;

inline json scalar_json(const Scalar& z) { return json::array({z.real(), z.imag()}); }

inline json vector_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(scalar_json(v(i)));
    return arr;
}

inline json finite_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

inline json balance_json(const BalanceOutcome& out) {
    json b;
    b["continuum"] = out.balance.continuum;
    b["c0"] = vector_json(out.balance.c0);
    b["residual"] = out.balance.residual;
    if (out.balance.continuum) {
        b["base"] = vector_json(out.balance.base);
        b["dir"] = vector_json(out.balance.dir);
        b["pivot"] = out.balance.pivot;
    }
    if (out.pinned_at) b["pinned_at"] = scalar_json(*out.pinned_at);

    const ResonanceInfo& info = out.resonances;
    json spectrum = json::array();
    for (const Scalar& ev : info.spectrum) spectrum.push_back(scalar_json(ev));
    b["spectrum"] = spectrum;
    b["minus_one_present"] = info.minus_one_present;
    b["resonances"] = info.resonances;
    json kdims = json::object();
    for (const auto& [k, dim] : info.kernel_dim) kdims[std::to_string(k)] = dim;
    b["kernel_dims"] = kdims;
    b["free_parameters"] = info.family_parameters;
    if (!info.near_resonances.empty()) {
        json near = json::array();
        for (const Scalar& ev : info.near_resonances) near.push_back(scalar_json(ev));
        b["near_resonances"] = near;
    }

    if (!out.obstruction.empty()) {
        b["obstruction"] = out.obstruction;
        return b;
    }

    const LaurentSolution& sol = *out.laurent;
    b["parameters"] = sol.parameters;
    json porders = json::object();
    for (const auto& [name, k] : sol.parameter_orders) porders[name] = k;
    b["parameter_orders"] = porders;
    json coeffs = json::array();
    for (const auto& row : sol.coeff) {
        json r = json::array();
        for (const auto& p : row) r.push_back(p.to_string());
        coeffs.push_back(r);
    }
    b["coefficients"] = coeffs;

    json constancy = json::array();
    for (const auto& c : out.constancy) {
        json cj;
        cj["name"] = c.name;
        cj["constant"] = c.constant;
        cj["max_negative_modulus"] = c.max_negative_modulus;
        cj["z0"] = c.z0.to_string();
        constancy.push_back(cj);
    }
    b["constancy"] = constancy;
    if (!out.constancy_errors.empty()) b["constancy_errors"] = out.constancy_errors;

    if (out.majorant) {
        json m;
        m["a"] = out.majorant->a;
        m["b"] = out.majorant->b;
        m["c"] = out.majorant->c;
        m["lambda_n"] = out.majorant->lambda_n;
        m["radius"] = out.majorant->radius;
        m["beta"] = out.majorant->beta;
        b["majorant"] = m;
        b["domination_ratio"] = finite_or_null(out.domination_ratio);
    } else if (!out.majorant_note.empty()) {
        b["majorant_error"] = out.majorant_note;
    }

    if (!out.draw.empty()) {
        json d = json::object();
        for (const auto& [name, v] : out.draw) d[name] = scalar_json(v);
        b["draw"] = d;
    }
    b["series_residual"] = finite_or_null(out.series_residual_value);
    b["series_vs_integration"] = finite_or_null(out.series_vs_integration_gap);
    if (std::isfinite(out.integration_probe_radius))
        b["integration_probe_radius"] = out.integration_probe_radius;
    if (!out.numeric_note.empty()) b["numeric_error"] = out.numeric_note;
    return b;
}

inline json poisson_json(const PoissonReport& p) {
    json j;
    j["antisymmetric"] = p.antisymmetric;
    j["jacobi_ok"] = p.jacobi_ok;
    j["max_jacobi_residual"] = p.max_jacobi_residual;
    json cas = json::object();
    for (const auto& [name, ok] : p.casimir) cas[name] = ok;
    j["casimir"] = cas;
    json inv = json::object();
    for (const auto& [name, ok] : p.involution) inv[name] = ok;
    j["involution"] = inv;
    if (p.field_matches_rhs) j["field_matches_rhs"] = *p.field_matches_rhs;
    return j;
}

}  // namespace detail

inline nlohmann::json report_json(const AnalysisReport& rep) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["kind"] = "analysis";
    j["system"] = rep.system_name;
    j["vars"] = rep.vars;
    j["weights"] = rep.weights;
    j["delta_nonzero"] = rep.delta_nonzero;
    j["seed"] = rep.seed;
    j["order"] = rep.order;
    j["any_obstruction"] = rep.any_obstruction;
    nlohmann::json balances = nlohmann::json::array();
    for (const auto& out : rep.balances) balances.push_back(detail::balance_json(out));
    j["balances"] = balances;
    if (rep.poisson) j["poisson"] = detail::poisson_json(*rep.poisson);
    return j;
}

inline nlohmann::json report_json(const CheckReport& rep) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["kind"] = "check";
    j["system"] = rep.system_name;
    j["all_pass"] = rep.all_pass();
    nlohmann::json items = nlohmann::json::array();
    for (const auto& it : rep.items) {
        nlohmann::json ij;
        ij["name"] = it.name;
        ij["pass"] = it.pass;
        ij["value"] = detail::finite_or_null(it.value);
        if (it.tol > 0.0) ij["tol"] = it.tol;
        if (!it.detail.empty()) ij["detail"] = it.detail;
        items.push_back(ij);
    }
    j["checks"] = items;
    return j;
}

// Structured error envelope used by the CLI when the pipeline throws.
inline nlohmann::json error_json(const std::string& kind, const std::string& what) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["kind"] = "error";
    j["error"] = kind;
    j["what"] = what;
    return j;
}

}  // namespace qhode

#endif  // QHODE_REPORT_HPP
