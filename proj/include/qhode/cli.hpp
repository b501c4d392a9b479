// qhode/cli.hpp
//
// Command-line front end: `qhode analyze` runs the full pipeline and prints
// a human-readable summary or a JSON report; `qhode check` runs selected
// verification suites and exits nonzero when any fails.
//
// Exit codes: 0 success, 1 usage or input error, 2 mathematical obstruction
// (an expansion or constancy step failed in a structured way), 3 numeric
// failure (conditioning, blow-up, stiffness).
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_CLI_HPP
#define QHODE_CLI_HPP

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qhode/analysis.hpp"
#include "qhode/parser.hpp"
#include "qhode/report.hpp"

namespace qhode {
namespace detail {

struct ClassifiedError {
    std::string name;
    int exit_code = 1;
};

// Dynamic classification of the library's error hierarchy into the CLI's
// exit-code contract and a stable error name for the JSON envelope.
inline ClassifiedError classify_error(const error& e) {
    auto is = [&](auto* tag) { return dynamic_cast<decltype(tag)>(&e) != nullptr; };
    // Mathematical obstructions (exit 2).
    if (is(static_cast<const no_balance_found*>(nullptr))) return {"no_balance_found", 2};
    if (is(static_cast<const compatibility_obstruction*>(nullptr)))
        return {"compatibility_obstruction", 2};
    if (is(static_cast<const not_constant*>(nullptr))) return {"not_constant", 2};
    if (is(static_cast<const family_ambiguous*>(nullptr))) return {"family_ambiguous", 2};
    if (is(static_cast<const pole_too_deep*>(nullptr))) return {"pole_too_deep", 2};
    if (is(static_cast<const invalid_regime*>(nullptr))) return {"invalid_regime", 2};
    if (is(static_cast<const no_positive_root*>(nullptr))) return {"no_positive_root", 2};
    if (is(static_cast<const not_expanded_far_enough*>(nullptr)))
        return {"not_expanded_far_enough", 2};
    if (is(static_cast<const modulus_out_of_range*>(nullptr)))
        return {"modulus_out_of_range", 2};
    // Numeric failures (exit 3).
    if (is(static_cast<const ill_conditioned*>(nullptr))) return {"ill_conditioned", 3};
    if (is(static_cast<const division_by_zero*>(nullptr))) return {"division_by_zero", 3};
    if (is(static_cast<const blow_up*>(nullptr))) return {"blow_up", 3};
    if (is(static_cast<const stiffness_failure*>(nullptr))) return {"stiffness_failure", 3};
    // Input/usage errors (exit 1).
    if (is(static_cast<const syntax_error*>(nullptr))) return {"syntax_error", 1};
    if (is(static_cast<const unbound_identifier*>(nullptr))) return {"unbound_identifier", 1};
    if (is(static_cast<const arity_mismatch*>(nullptr))) return {"arity_mismatch", 1};
    if (is(static_cast<const unsupported_derivative_order*>(nullptr)))
        return {"unsupported_derivative_order", 1};
    if (is(static_cast<const dimension_mismatch*>(nullptr))) return {"dimension_mismatch", 1};
    if (is(static_cast<const missing_poisson*>(nullptr))) return {"missing_poisson", 1};
    if (is(static_cast<const semantic_error*>(nullptr))) return {"semantic_error", 1};
    return {"error", 1};
}

// Accepts "2", "-1.5", "0.8+0.6i", "0.8-0.6i", "1.5i", "re,im".
inline Scalar parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw semantic_error("empty complex literal");

    auto comma = s.find(',');
    if (comma != std::string::npos)
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};

    if (s.back() == 'i') {
        std::string body = s.substr(0, s.size() - 1);
        // Split at the last +/- that is not a leading sign or exponent sign.
        for (std::size_t p = body.size(); p-- > 1;) {
            char c = body[p];
            if ((c == '+' || c == '-') && body[p - 1] != 'e' && body[p - 1] != 'E') {
                std::string im = body.substr(p);
                if (im == "+" || im == "-") im += "1";
                return {std::stod(body.substr(0, p)), std::stod(im)};
            }
        }
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        return {0.0, std::stod(body)};
    }
    return {std::stod(s), 0.0};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw semantic_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string system_name_from_path(const std::string& path) {
    auto slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    if (dot != std::string::npos && dot > 0) base = base.substr(0, dot);
    return base.empty() ? "system" : base;
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s;
}

inline void print_analysis(std::ostream& out, const AnalysisReport& rep) {
    out << "system " << rep.system_name << ": " << rep.vars.size()
        << " variables, weights (" << join_ints(rep.weights) << "), delta_nonzero "
        << (rep.delta_nonzero ? "yes" : "no") << "\n";
    int bi = 0;
    for (const BalanceOutcome& o : rep.balances) {
        ++bi;
        out << "balance " << bi << "/" << rep.balances.size() << ": "
            << (o.balance.continuum ? "continuum" : "isolated")
            << ", residual " << format_double(o.balance.residual) << "\n";
        out << "  c0 = (";
        for (Eigen::Index i = 0; i < o.balance.c0.size(); ++i)
            out << (i ? ", " : "") << format_scalar(o.balance.c0(i));
        out << ")";
        if (o.pinned_at) out << "  [pinned at " << format_scalar(*o.pinned_at) << "]";
        out << "\n  spectrum {";
        for (std::size_t i = 0; i < o.resonances.spectrum.size(); ++i)
            out << (i ? ", " : "") << format_scalar(o.resonances.spectrum[i]);
        out << "}; resonances:";
        if (o.resonances.resonances.empty()) out << " none";
        for (int k : o.resonances.resonances)
            out << " k=" << k << " (dim " << o.resonances.kernel_dim.at(k) << ")";
        out << "; free parameters " << o.resonances.family_parameters << "\n";
        if (!o.obstruction.empty()) {
            out << "  obstruction: " << o.obstruction << "\n";
            continue;
        }
        const LaurentSolution& sol = *o.laurent;
        if (!sol.parameters.empty()) {
            out << "  parameters:";
            for (const auto& [name, k] : sol.parameter_orders)
                out << " " << name << " (order " << k << ")";
            out << "\n";
        }
        for (const auto& c : o.constancy)
            out << "  constancy " << c.name << ": " << (c.constant ? "ok" : "FAILED")
                << " (max negative-order modulus " << format_double(c.max_negative_modulus)
                << "), z0 = " << c.z0.to_string() << "\n";
        for (const auto& msg : o.constancy_errors) out << "  constancy FAILED: " << msg << "\n";
        if (o.majorant)
            out << "  majorant: A " << format_double(o.majorant->a) << ", B "
                << format_double(o.majorant->b) << ", C " << format_double(o.majorant->c)
                << ", radius " << format_double(o.majorant->radius) << ", domination ratio "
                << format_double(o.domination_ratio) << "\n";
        else if (!o.majorant_note.empty())
            out << "  majorant unavailable: " << o.majorant_note << "\n";
        if (std::isfinite(o.series_residual_value))
            out << "  series residual " << format_double(o.series_residual_value) << "\n";
        if (std::isfinite(o.series_vs_integration_gap))
            out << "  series vs integration " << format_double(o.series_vs_integration_gap)
                << " at radius " << format_double(o.integration_probe_radius) << "\n";
        if (!o.numeric_note.empty()) out << "  numeric check failed: " << o.numeric_note << "\n";
    }
    if (rep.poisson) {
        const PoissonReport& p = *rep.poisson;
        out << "poisson: antisymmetric " << (p.antisymmetric ? "yes" : "no") << ", jacobi "
            << (p.jacobi_ok ? "ok" : "FAILED") << " (max residual "
            << format_double(p.max_jacobi_residual) << ")\n";
        for (const auto& [name, ok] : p.casimir)
            if (ok) out << "  casimir: " << name << "\n";
        for (const auto& [name, ok] : p.involution)
            out << "  " << name << " = 0: " << (ok ? "yes" : "NO") << "\n";
        if (p.field_matches_rhs)
            out << "  hamiltonian field matches rhs: " << (*p.field_matches_rhs ? "yes" : "NO")
                << "\n";
    }
}

inline void print_checks(std::ostream& out, const CheckReport& rep) {
    for (const CheckItem& it : rep.items) {
        out << (it.pass ? "[ ok ] " : "[FAIL] ") << it.name;
        if (it.tol > 0.0)
            out << ": " << format_double(it.value) << " (tol " << format_double(it.tol) << ")";
        if (!it.detail.empty()) out << "  -- " << it.detail;
        out << "\n";
    }
    out << (rep.all_pass() ? "all checks passed" : "some checks FAILED") << "\n";
}

}  // namespace detail

// Entry point shared by the binary and the test-suite; argv-style arguments
// without the program name.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"meromorphic-solution analysis of quasi-homogeneous ODE systems"};
    app.require_subcommand(1);

    std::string file;
    AnalyzeOptions opt;
    std::string alpha_text;
    bool as_json = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("file", file, "system description file")->required();
        cmd->add_option("--order", opt.order, "expansion order N")->check(CLI::Range(1, 200));
        cmd->add_option("--seed", opt.seed, "seed for multistart and parameter draws");
        cmd->add_option("--starts", opt.starts, "Newton multistart count")
            ->check(CLI::Range(1, 100000));
        cmd->add_option("--alpha", alpha_text,
                        "pin value for balance continua (complex, e.g. 2 or 0.8+0.6i)");
        cmd->add_option("--tol", opt.tol, "resonance/constancy tolerance");
        cmd->add_flag("--json", as_json, "emit a JSON report");
    };

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "run the full pipeline");
    add_common(analyze_cmd);

    CheckSelect sel;
    CLI::App* check_cmd = app.add_subcommand("check", "run verification suites");
    add_common(check_cmd);
    check_cmd->add_flag("--residual", sel.residual, "series defect and integration agreement");
    check_cmd->add_flag("--majorant", sel.majorant, "convergence radius and domination");
    check_cmd->add_flag("--poisson", sel.poisson, "bracket axioms, casimirs, involution");
    check_cmd->add_flag("--divisor", sel.divisor, "heavy-top divisor identity");
    check_cmd->add_flag("--elliptic", sel.elliptic, "rigid-body closed-form residual");
    check_cmd->add_option("--draws", opt.draws, "random parameter draws per divisor check")
        ->check(CLI::Range(1, 10000));

    try {
        // CLI11's vector overload consumes arguments from the back.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints its own help/usage; map to the exit-code contract.
        std::ostringstream msg;
        int rc = app.exit(e, out, msg);
        err << msg.str();
        return rc == 0 ? 0 : 1;
    }

    try {
        if (!alpha_text.empty()) opt.alpha = detail::parse_complex(alpha_text);
        std::string text = detail::read_file(file);
        SystemSpec spec = parse_system(text, detail::system_name_from_path(file));

        if (app.got_subcommand(analyze_cmd)) {
            AnalysisReport rep = analyze(spec, opt);
            if (as_json)
                out << report_json(rep).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
            else
                detail::print_analysis(out, rep);
            return rep.any_obstruction ? 2 : 0;
        }

        CheckReport rep = run_checks(spec, sel, opt);
        if (as_json)
            out << report_json(rep).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
        else
            detail::print_checks(out, rep);
        return rep.all_pass() ? 0 : 2;
    } catch (const error& e) {
        auto cls = detail::classify_error(e);
        if (as_json)
            out << error_json(cls.name, e.what()).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
        err << "error (" << cls.name << "): " << e.what() << "\n";
        return cls.exit_code;
    } catch (const std::exception& e) {
        if (as_json) out << error_json("error", e.what()).dump(2, ' ', false, nlohmann::json::error_handler_t::replace) << "\n";
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qhode

#endif  // QHODE_CLI_HPP
