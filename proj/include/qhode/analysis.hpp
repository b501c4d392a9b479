// qhode/analysis.hpp
//
// Whole-pipeline driver: weights -> balances -> spectra/resonances ->
// Laurent expansion -> first-integral constancy and divisor constraints ->
// majorant bounds -> numeric cross-checks. Produces the plain-old-data
// structures that the report writer and the command-line front end consume.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_ANALYSIS_HPP
#define QHODE_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhode/balance.hpp"
#include "qhode/elliptic.hpp"
#include "qhode/errors.hpp"
#include "qhode/integrability.hpp"
#include "qhode/kowalevski.hpp"
#include "qhode/laurent.hpp"
#include "qhode/majorant.hpp"
#include "qhode/numeric.hpp"
#include "qhode/rng.hpp"
#include "qhode/scalar.hpp"
#include "qhode/system.hpp"
#include "qhode/weights.hpp"

namespace qhode {

struct AnalyzeOptions {
    int order = 20;              // expansion order N
    std::uint64_t seed = 0;      // master seed for multistart and draws
    int starts = 200;            // Newton multistart count
    std::optional<Scalar> alpha; // pin for balance continua (default 2)
    double tol = 1e-8;           // resonance / constancy tolerance
    int draws = 10;              // verification draws (check layer)
    bool numeric_checks = true;  // residual and series-vs-integration
    bool majorant_checks = true; // convergence constants and domination
};

// Everything the pipeline learned about one balance.
struct BalanceOutcome {
    Balance balance;                  // pinned representative for continua
    std::optional<Scalar> pinned_at;  // pivot-coordinate value used to pin
    ResonanceInfo resonances;
    std::optional<LaurentSolution> laurent;
    std::string obstruction;          // nonempty: why the expansion stopped

    std::vector<ConstancyReport> constancy;
    std::vector<std::string> constancy_errors;
    std::optional<DivisorConstraints> divisor;

    std::optional<MajorantBound> majorant;
    std::string majorant_note;
    double domination_ratio = std::numeric_limits<double>::quiet_NaN();

    std::map<std::string, Scalar> draw;  // instantiation for numeric checks
    double series_residual_value = std::numeric_limits<double>::quiet_NaN();
    double series_vs_integration_gap = std::numeric_limits<double>::quiet_NaN();
    double integration_probe_radius = std::numeric_limits<double>::quiet_NaN();
    std::string numeric_note;
};

struct AnalysisReport {
    std::string system_name;
    std::vector<std::string> vars;
    std::vector<int> weights;
    bool delta_nonzero = false;  // weight vector certified unique
    std::uint64_t seed = 0;
    int order = 0;
    std::vector<BalanceOutcome> balances;
    std::optional<PoissonReport> poisson;
    bool any_obstruction = false;
};

namespace detail {

// Default pin for a balance continuum when the caller gives none. The line
// parameter is the pivot coordinate itself, so small integers are generic;
// +-1 and 0 are avoided because the divisor geometry degenerates there.
inline constexpr double kDefaultContinuumPin = 2.0;

inline std::map<std::string, Scalar> draw_assignment(const std::vector<std::string>& params,
                                                     Rng& rng,
                                                     double lo = 0.3, double hi = 1.0) {
    std::map<std::string, Scalar> draw;
    for (const auto& p : params) draw[p] = rng.complex_annulus(lo, hi);
    return draw;
}

// max_k max_i |c_i^(k)| / beta_k over 1 <= k <= order. A ratio <= 1 is the
// domination property; beta_k = 0 with a nonzero coefficient yields +inf.
inline double domination_ratio(const LaurentSolution& sol,
                               const std::map<std::string, Scalar>& draw,
                               const MajorantBound& bound) {
    double ratio = 0.0;
    int top = std::min<int>(sol.order, static_cast<int>(bound.beta.size()) - 1);
    for (int k = 1; k <= top; ++k) {
        double peak = 0.0;
        for (int i = 0; i < sol.n(); ++i)
            peak = std::max(peak, std::abs(sol.coeff[static_cast<std::size_t>(k)]
                                                    [static_cast<std::size_t>(i)].eval(draw)));
        double bk = bound.beta[static_cast<std::size_t>(k)];
        if (peak == 0.0) continue;
        if (bk <= 0.0) return std::numeric_limits<double>::infinity();
        ratio = std::max(ratio, peak / bk);
    }
    return ratio;
}

// Probe radius for comparing the series against direct integration. The
// natural choice is a quarter of the certified radius, but for deep poles
// that can push |w| ~ A r^{-s_max} past the integrator's blow-up guard, so
// the radius is floored to keep |w| around 1e6 and capped at the default
// residual-sampling radius.
inline double integration_probe_radius(const MajorantBound& bound, const std::vector<int>& s) {
    int s_max = *std::max_element(s.begin(), s.end());
    double floor_r = std::pow(bound.a / 1e6, 1.0 / static_cast<double>(s_max));
    return std::min(0.05, std::max(bound.radius / 4.0, floor_r));
}

}  // namespace detail

// Run the full pipeline on a parsed system. Throws only for whole-system
// failures (no weight vector, no balances); per-balance breakdowns are
// recorded in the corresponding BalanceOutcome instead.
inline AnalysisReport analyze(const SystemSpec& spec, const AnalyzeOptions& opt = {}) {
    AnalysisReport rep;
    rep.system_name = spec.name;
    rep.vars = spec.vars;
    rep.seed = opt.seed;
    rep.order = opt.order;

    auto wv = weight_vector(spec);
    if (!wv)
        throw semantic_error("system '" + spec.name + "' admits no weight vector "
                             "with all weights >= 1; it is not quasi-homogeneous");
    rep.weights = wv->s;
    rep.delta_nonzero = wv->unique;

    BalanceOptions bopt;
    bopt.starts = opt.starts;
    bopt.seed = bopt.seed + opt.seed * 0x9e3779b97f4a7c15ull;
    std::vector<Balance> balances = solve_balances(spec, wv->s, bopt);

    Rng draw_rng(0x7ea700d1ce5eedull ^ (opt.seed * 0xbf58476d1ce4e5b9ull + 0x52a7));

    for (const Balance& raw : balances) {
        BalanceOutcome out;
        Balance b = raw;
        if (raw.continuum) {
            Scalar pin = opt.alpha.value_or(Scalar(detail::kDefaultContinuumPin));
            b = pin_family(raw, pin);
            out.pinned_at = pin;
        }
        out.balance = b;
        out.resonances = resonance_info(spec, wv->s, b, opt.tol);

        try {
            out.laurent = expand(spec, wv->s, b, opt.order);
        } catch (const error& e) {
            out.obstruction = e.what();
            rep.any_obstruction = true;
            rep.balances.push_back(std::move(out));
            continue;
        }
        const LaurentSolution& sol = *out.laurent;
        out.resonances = sol.resonances;

        bool constancy_ok = true;
        for (const auto& [name, h] : spec.integrals) {
            try {
                out.constancy.push_back(integral_constancy(sol, h, name, opt.tol));
            } catch (const error& e) {
                constancy_ok = false;
                out.constancy_errors.push_back(name + ": " + e.what());
            }
        }
        if (constancy_ok && !spec.integrals.empty())
            out.divisor = divisor_constraints(sol, spec, opt.tol);

        out.draw = detail::draw_assignment(sol.parameters, draw_rng);

        if (opt.majorant_checks) {
            try {
                out.majorant = majorant_bound(spec, sol, out.draw);
                out.domination_ratio = detail::domination_ratio(sol, out.draw, *out.majorant);
            } catch (const error& e) {
                out.majorant_note = e.what();
            }
        }

        if (opt.numeric_checks) {
            try {
                NumericSeries ns = instantiate(sol, out.draw);
                out.series_residual_value = series_residual(spec, ns);
                if (out.majorant && out.majorant->radius > 0.0) {
                    out.integration_probe_radius =
                        detail::integration_probe_radius(*out.majorant, wv->s);
                    out.series_vs_integration_gap =
                        series_vs_integration(spec, ns, {out.integration_probe_radius});
                }
            } catch (const error& e) {
                out.numeric_note = e.what();
            }
        }

        rep.balances.push_back(std::move(out));
    }

    if (spec.poisson) rep.poisson = poisson_audit(spec);
    return rep;
}

// ---------------------------------------------------------------------------
// Verification-only layer: named pass/fail items at pinned tolerances.

struct CheckSelect {
    bool residual = false;
    bool majorant = false;
    bool poisson = false;
    bool divisor = false;
    bool elliptic = false;
    bool any() const { return residual || majorant || poisson || divisor || elliptic; }
};

struct CheckItem {
    std::string name;
    bool pass = false;
    double value = 0.0;  // the measured quantity
    double tol = 0.0;    // threshold it was held against (0 = boolean check)
    std::string detail;
};

struct CheckReport {
    std::string system_name;
    std::vector<CheckItem> items;
    bool all_pass() const {
        for (const auto& it : items)
            if (!it.pass) return false;
        return true;
    }
};

namespace detail {

inline void check_value(CheckReport& rep, const std::string& name, double value, double tol,
                        const std::string& detail_text = "") {
    rep.items.push_back({name, std::isfinite(value) && value < tol, value, tol, detail_text});
}

inline void check_flag(CheckReport& rep, const std::string& name, bool pass,
                       const std::string& detail_text = "") {
    rep.items.push_back({name, pass, pass ? 1.0 : 0.0, 0.0, detail_text});
}

// The divisor identity exercised across both balance continua, a few pin
// values, and `draws` random parameter assignments per pin. A short
// expansion suffices: the z^0 coefficients need order >= the largest
// weighted degree among the integrals.
inline void divisor_checks(CheckReport& rep, const SystemSpec& spec,
                           const std::vector<int>& s, const std::vector<Balance>& balances,
                           int draws, std::uint64_t seed) {
    const std::vector<Scalar> pins{Scalar(2.0), Scalar(1.5), Scalar(0.8, 0.6)};
    const int order = 8;
    int family_index = 0;
    for (const Balance& b : balances) {
        if (!b.continuum) continue;
        ++family_index;
        for (const Scalar& pin : pins) {
            LaurentSolution sol = expand(spec, s, pin_family(b, pin), order);
            Rng draw_rng(0xd1715e7ull ^ (seed * 0x9e3779b97f4a7c15ull)
                         ^ (static_cast<std::uint64_t>(family_index) << 32));
            double worst = 0.0;
            bool all_ok = true;
            Scalar eps_used(0.0);
            for (int d = 0; d < draws; ++d) {
                auto draw = draw_assignment(sol.parameters, draw_rng);
                KowalewskiDivisorResult res = verify_kowalewski_divisor(sol, spec, draw);
                worst = std::max(worst, res.value);
                all_ok = all_ok && res.ok;
                eps_used = res.eps_used;
            }
            CheckItem item;
            item.name = "divisor[family " + std::to_string(family_index) + ", alpha="
                        + format_scalar(pin) + "]";
            item.pass = all_ok;
            item.value = worst;
            item.tol = 1e-6;
            item.detail = std::to_string(draws) + " draws, eps " + format_scalar(eps_used);
            rep.items.push_back(std::move(item));
        }
    }
    if (family_index == 0)
        check_flag(rep, "divisor", false, "no balance continuum found");
}

}  // namespace detail

// Run the selected verification checks. With no selector: constancy,
// residuals, majorant domination, and (when a bracket is declared) the
// Poisson audit.
inline CheckReport run_checks(const SystemSpec& spec, CheckSelect sel,
                              const AnalyzeOptions& opt = {}) {
    if (!sel.any()) {
        sel.residual = true;
        sel.majorant = true;
        sel.poisson = spec.poisson.has_value();
    }
    CheckReport rep;
    rep.system_name = spec.name;

    AnalyzeOptions aopt = opt;
    aopt.numeric_checks = sel.residual;
    aopt.majorant_checks = sel.majorant || sel.residual;
    AnalysisReport ana = analyze(spec, aopt);

    int bi = 0;
    for (const BalanceOutcome& out : ana.balances) {
        ++bi;
        std::string tag = "balance " + std::to_string(bi);
        if (!out.obstruction.empty()) {
            detail::check_flag(rep, tag + " expansion", false, out.obstruction);
            continue;
        }
        for (const auto& c : out.constancy)
            detail::check_value(rep, tag + " constancy[" + c.name + "]",
                                c.max_negative_modulus, opt.tol);
        for (const auto& msg : out.constancy_errors)
            detail::check_flag(rep, tag + " constancy", false, msg);
        if (sel.residual) {
            detail::check_value(rep, tag + " series residual", out.series_residual_value, 1e-8);
            if (std::isfinite(out.series_vs_integration_gap))
                detail::check_value(rep, tag + " series vs integration",
                                    out.series_vs_integration_gap, 1e-5,
                                    "probe radius "
                                        + format_double(out.integration_probe_radius));
        }
        if (sel.majorant) {
            if (out.majorant) {
                detail::check_flag(rep, tag + " majorant radius",
                                   out.majorant->radius > 0.0,
                                   "radius " + format_double(out.majorant->radius));
                detail::check_flag(rep, tag + " majorant domination",
                                   out.domination_ratio <= 1.0 + 1e-9,
                                   "ratio " + format_double(out.domination_ratio));
            } else {
                detail::check_flag(rep, tag + " majorant", false, out.majorant_note);
            }
        }
    }

    if (sel.poisson) {
        if (ana.poisson) {
            const PoissonReport& p = *ana.poisson;
            detail::check_flag(rep, "poisson antisymmetry", p.antisymmetric);
            detail::check_flag(rep, "poisson jacobi", p.jacobi_ok,
                               "max residual " + format_double(p.max_jacobi_residual));
            std::string casimirs;
            for (const auto& [name, is_cas] : p.casimir)
                if (is_cas) casimirs += (casimirs.empty() ? "" : ", ") + name;
            detail::check_flag(rep, "poisson casimirs", true,
                               casimirs.empty() ? "none" : casimirs);
            for (const auto& [pair_name, ok] : p.involution)
                detail::check_flag(rep, "involution " + pair_name, ok);
            if (p.field_matches_rhs)
                detail::check_flag(rep, "hamiltonian field matches rhs", *p.field_matches_rhs);
        } else {
            detail::check_flag(rep, "poisson", false, "no bracket declared");
        }
    }

    if (sel.divisor) {
        auto wv = weight_vector(spec);
        BalanceOptions bopt;
        bopt.starts = opt.starts;
        bopt.seed = bopt.seed + opt.seed * 0x9e3779b97f4a7c15ull;
        auto balances = solve_balances(spec, wv->s, bopt);
        detail::divisor_checks(rep, spec, wv->s, balances, opt.draws, opt.seed);
    }

    if (sel.elliptic) {
        auto find_const = [&](const std::string& nm) -> std::optional<double> {
            for (const auto& [k, v] : spec.consts)
                if (k == nm) return v.real();
            return std::nullopt;
        };
        auto l1 = find_const("l1"), l2 = find_const("l2"), l3 = find_const("l3");
        if (spec.n() == 3 && l1 && l2 && l3) {
            double h2 = 2.0;
            double h1 = (*l2 + *l3) * h2 / 4.0;  // midpoint of the admissible window
            std::vector<double> grid;
            for (int t = 0; t <= 40; ++t) grid.push_back(0.05 * t);
            EulerClosedFormResult res = euler_closed_form_check({*l1, *l2, *l3}, h1, h2, grid);
            CheckItem item;
            item.name = "elliptic closed form";
            item.pass = res.ok;
            item.value = res.max_residual;
            item.tol = 1e-6;
            item.detail = "signs (" + std::to_string(res.signs[0]) + ","
                          + std::to_string(res.signs[1]) + "," + std::to_string(res.signs[2])
                          + "), omega " + format_double(res.omega) + ", k^2 "
                          + format_double(res.k2) + ", H1 " + format_double(h1) + ", H2 "
                          + format_double(h2);
            rep.items.push_back(std::move(item));
        } else {
            detail::check_flag(rep, "elliptic closed form", false,
                               "needs a three-variable system with constants l1, l2, l3");
        }
    }

    return rep;
}

}  // namespace qhode

#endif  // QHODE_ANALYSIS_HPP
