// qhode/parser.hpp
//
// Front end for the system-definition DSL:
//
//   # comment
//   consts: lambda1 = 1.0, lambda2 = 2.0
//   vars: m1, m2, m3
//   eq: m1' = (lambda3 - lambda2) * m2 * m3
//   integral H1 = 0.5*(m1^2 + m2^2)
//   poisson: [[0, -m3, m2], [m3, 0, -m1], [-m2, m1, 0]]
//   hamiltonian: H1
//
// `'` marks d/dz, `^` integer powers, `i` is the imaginary unit. Statements
// end at a newline (outside brackets) or at `;`. Constants are bound to
// numbers at parse time. A single equation of order n >= 2 in one declared
// variable is reduced to its companion first-order system.
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_PARSER_HPP
#define QHODE_PARSER_HPP

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qhode/errors.hpp"
#include "qhode/poly.hpp"
#include "qhode/scalar.hpp"
#include "qhode/system.hpp"

namespace qhode {
namespace detail {

enum class TokKind { ident, number, op, end };

struct Token {
    TokKind kind = TokKind::end;
    std::string text;
    int line = 0;
    int col = 0;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
                continue;
            }
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
                continue;
            }
            if (c == '\n') {
                out.push_back({TokKind::op, "\n", line_, col_});
                advance();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(ident());
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))
                || (c == '.' && pos_ + 1 < text_.size()
                    && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                out.push_back(number());
                continue;
            }
            static const std::string single = "+-*/^()[]{},=;:'";
            if (single.find(c) != std::string::npos) {
                out.push_back({TokKind::op, std::string(1, c), line_, col_});
                advance();
                continue;
            }
            throw syntax_error(line_, col_, "a token (unexpected character '"
                               + std::string(1, c) + "')");
        }
        out.push_back({TokKind::end, "", line_, col_});
        return out;
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    Token ident() {
        Token t{TokKind::ident, "", line_, col_};
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            t.text += text_[pos_];
            advance();
        }
        return t;
    }

    Token number() {
        Token t{TokKind::number, "", line_, col_};
        bool seen_dot = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                t.text += c;
                advance();
            } else if (c == '.' && !seen_dot) {
                seen_dot = true;
                t.text += c;
                advance();
            } else if ((c == 'e' || c == 'E') && pos_ + 1 < text_.size()
                       && (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))
                           || ((text_[pos_ + 1] == '+' || text_[pos_ + 1] == '-')
                               && pos_ + 2 < text_.size()
                               && std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))))) {
                t.text += c;
                advance();
                if (text_[pos_] == '+' || text_[pos_] == '-') {
                    t.text += text_[pos_];
                    advance();
                }
            } else {
                break;
            }
        }
        return t;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// One statement = tokens up to an unbracketed newline or ';'.
struct Statement {
    std::vector<Token> toks;  // without the terminator, with a trailing `end`
};

inline std::vector<Statement> split_statements(const std::vector<Token>& toks) {
    std::vector<Statement> out;
    Statement cur;
    int depth = 0;
    for (const auto& t : toks) {
        if (t.kind == TokKind::op && (t.text == "(" || t.text == "[" || t.text == "{")) ++depth;
        if (t.kind == TokKind::op && (t.text == ")" || t.text == "]" || t.text == "}")) --depth;
        bool terminator = (t.kind == TokKind::end)
                          || (t.kind == TokKind::op && t.text == ";")
                          || (t.kind == TokKind::op && t.text == "\n" && depth == 0);
        if (terminator) {
            if (!cur.toks.empty()) {
                Token e{TokKind::end, "", t.line, t.col};
                cur.toks.push_back(e);
                out.push_back(std::move(cur));
                cur = Statement{};
            }
            continue;
        }
        if (t.kind == TokKind::op && t.text == "\n") continue;  // inside brackets
        cur.toks.push_back(t);
    }
    return out;
}

// Recursive-descent expression parser producing RationalFn over a fixed
// variable list. `lookup` resolves an identifier (with its derivative
// order from trailing quotes) to a value; it throws for unknown names.
class ExprParser {
  public:
    using Lookup = RationalFn (*)(void*, const Token&, int order);

    ExprParser(const std::vector<Token>& toks, std::size_t start, int arity,
               void* ctx, Lookup lookup)
        : toks_(toks), pos_(start), arity_(arity), ctx_(ctx), lookup_(lookup) {}

    RationalFn parse_expression() {
        RationalFn v = parse_term();
        while (is_op("+") || is_op("-")) {
            std::string op = cur().text;
            ++pos_;
            RationalFn r = parse_term();
            v = (op == "+") ? v + r : v - r;
        }
        return v;
    }

    std::size_t position() const { return pos_; }

    void expect_end() const {
        if (toks_[pos_].kind != TokKind::end)
            throw syntax_error(cur().line, cur().col, "end of statement");
    }

  private:
    const Token& cur() const { return toks_[pos_]; }

    bool is_op(const char* s) const {
        return cur().kind == TokKind::op && cur().text == s;
    }

    RationalFn parse_term() {
        RationalFn v = parse_factor();
        while (is_op("*") || is_op("/")) {
            std::string op = cur().text;
            ++pos_;
            RationalFn r = parse_factor();
            v = (op == "*") ? v * r : v / r;
        }
        return v;
    }

    RationalFn parse_factor() {
        if (is_op("-")) {
            ++pos_;
            return -parse_factor();
        }
        if (is_op("+")) {
            ++pos_;
            return parse_factor();
        }
        return parse_power();
    }

    RationalFn parse_power() {
        RationalFn base = parse_atom();
        if (is_op("^")) {
            ++pos_;
            bool neg = false;
            if (is_op("-")) {
                neg = true;
                ++pos_;
            }
            if (cur().kind != TokKind::number || cur().text.find('.') != std::string::npos
                || cur().text.find('e') != std::string::npos
                || cur().text.find('E') != std::string::npos)
                throw syntax_error(cur().line, cur().col, "an integer exponent");
            int e = 0;
            for (char c : cur().text) e = e * 10 + (c - '0');
            ++pos_;
            return base.pow(neg ? -e : e);
        }
        return base;
    }

    RationalFn parse_atom() {
        if (is_op("(")) {
            ++pos_;
            RationalFn v = parse_expression();
            if (!is_op(")"))
                throw syntax_error(cur().line, cur().col, "')'");
            ++pos_;
            return v;
        }
        if (cur().kind == TokKind::number) {
            double d = 0.0;
            try {
                d = std::stod(cur().text);
            } catch (const std::exception&) {
                throw syntax_error(cur().line, cur().col, "a numeric literal");
            }
            ++pos_;
            return RationalFn(PhasePoly::constant(arity_, Scalar(d, 0.0)));
        }
        if (cur().kind == TokKind::ident) {
            Token name = cur();
            ++pos_;
            int order = 0;
            while (is_op("'")) {
                ++order;
                ++pos_;
            }
            return lookup_(ctx_, name, order);
        }
        throw syntax_error(cur().line, cur().col, "an expression");
    }

    const std::vector<Token>& toks_;
    std::size_t pos_;
    int arity_;
    void* ctx_;
    Lookup lookup_;
};

struct RawEquation {
    Token lhs;       // variable name token
    int order = 1;   // number of quotes on the LHS
    Statement rhs;   // tokens of the right-hand side (with trailing end)
};

}  // namespace detail

// Parse the DSL text into a SystemSpec. A single equation of derivative
// order n >= 2 in a single declared variable is converted to its companion
// system with variables name1..namen.
inline SystemSpec parse_system(const std::string& text, const std::string& name = "system") {
    using detail::ExprParser;
    using detail::Statement;
    using detail::TokKind;
    using detail::Token;

    auto toks = detail::Lexer(text).run();
    auto statements = detail::split_statements(toks);

    std::vector<std::string> declared_vars;
    std::map<std::string, Scalar> const_table;
    std::vector<std::pair<std::string, Scalar>> const_order;
    std::vector<detail::RawEquation> equations;
    std::vector<std::pair<std::string, Statement>> raw_integrals;
    std::optional<Statement> raw_poisson;
    std::optional<Token> raw_hamiltonian;

    auto expect = [](const Token& t, TokKind kind, const std::string& what) {
        if (t.kind != kind) throw syntax_error(t.line, t.col, what);
    };
    auto expect_op = [](const Token& t, const char* s) {
        if (t.kind != TokKind::op || t.text != s)
            throw syntax_error(t.line, t.col, std::string("'") + s + "'");
    };

    // Constant expressions: arity-0 rational functions over the table built
    // so far; `i` is the imaginary unit.
    struct ConstCtx {
        const std::map<std::string, Scalar>* table;
    };
    auto const_lookup = [](void* ctx, const Token& t, int order) -> RationalFn {
        if (order != 0) throw unsupported_derivative_order(t.line, order);
        if (t.text == "i")
            return RationalFn(PhasePoly::constant(0, Scalar(0.0, 1.0)));
        const auto* table = static_cast<ConstCtx*>(ctx)->table;
        auto it = table->find(t.text);
        if (it == table->end()) throw unbound_identifier(t.line, t.text);
        return RationalFn(PhasePoly::constant(0, it->second));
    };
    auto eval_const = [&](const Statement& st, std::size_t start, std::size_t* end_pos) {
        ConstCtx ctx{&const_table};
        ExprParser p(st.toks, start, 0, &ctx, const_lookup);
        RationalFn v = p.parse_expression();
        if (end_pos) *end_pos = p.position();
        return v.eval({});
    };

    for (const auto& st : statements) {
        const auto& tk = st.toks;
        const Token& head = tk[0];
        if (head.kind != TokKind::ident)
            throw syntax_error(head.line, head.col, "a statement keyword");

        if (head.text == "consts") {
            expect_op(tk.at(1), ":");
            std::size_t p = 2;
            while (tk[p].kind != TokKind::end) {
                expect(tk[p], TokKind::ident, "a constant name");
                std::string cname = tk[p].text;
                if (cname == "i")
                    throw semantic_error("'i' is reserved for the imaginary unit (line "
                                         + std::to_string(tk[p].line) + ")");
                if (const_table.count(cname))
                    throw semantic_error("constant '" + cname + "' declared twice (line "
                                         + std::to_string(tk[p].line) + ")");
                expect_op(tk.at(p + 1), "=");
                std::size_t after = 0;
                Scalar value = eval_const(st, p + 2, &after);
                const_table[cname] = value;
                const_order.emplace_back(cname, value);
                p = after;
                if (tk[p].kind == TokKind::op && tk[p].text == ",") ++p;
                else break;
            }
            if (tk[p].kind != TokKind::end)
                throw syntax_error(tk[p].line, tk[p].col, "',' or end of statement");
        } else if (head.text == "vars") {
            expect_op(tk.at(1), ":");
            std::size_t p = 2;
            for (;;) {
                expect(tk.at(p), TokKind::ident, "a variable name");
                const std::string& vname = tk[p].text;
                if (vname == "i")
                    throw semantic_error("'i' is reserved for the imaginary unit (line "
                                         + std::to_string(tk[p].line) + ")");
                if (const_table.count(vname))
                    throw semantic_error("'" + vname + "' is already a constant (line "
                                         + std::to_string(tk[p].line) + ")");
                for (const auto& v : declared_vars)
                    if (v == vname)
                        throw semantic_error("variable '" + vname + "' declared twice (line "
                                             + std::to_string(tk[p].line) + ")");
                declared_vars.push_back(vname);
                ++p;
                if (tk[p].kind == TokKind::op && tk[p].text == ",") {
                    ++p;
                    continue;
                }
                break;
            }
            if (tk[p].kind != TokKind::end)
                throw syntax_error(tk[p].line, tk[p].col, "',' or end of statement");
        } else if (head.text == "eq") {
            expect_op(tk.at(1), ":");
            expect(tk.at(2), TokKind::ident, "a variable name");
            detail::RawEquation eq;
            eq.lhs = tk[2];
            std::size_t p = 3;
            eq.order = 0;
            while (tk[p].kind == TokKind::op && tk[p].text == "'") {
                ++eq.order;
                ++p;
            }
            if (eq.order == 0)
                throw syntax_error(tk[p].line, tk[p].col, "a derivative mark (')");
            expect_op(tk.at(p), "=");
            ++p;
            eq.rhs.toks.assign(tk.begin() + static_cast<std::ptrdiff_t>(p), tk.end());
            equations.push_back(std::move(eq));
        } else if (head.text == "integral") {
            expect(tk.at(1), TokKind::ident, "an integral name");
            expect_op(tk.at(2), "=");
            Statement body;
            body.toks.assign(tk.begin() + 3, tk.end());
            raw_integrals.emplace_back(tk[1].text, std::move(body));
        } else if (head.text == "poisson") {
            expect_op(tk.at(1), ":");
            Statement body;
            body.toks.assign(tk.begin() + 2, tk.end());
            raw_poisson = std::move(body);
        } else if (head.text == "hamiltonian") {
            expect_op(tk.at(1), ":");
            expect(tk.at(2), TokKind::ident, "an integral name");
            if (tk.at(3).kind != TokKind::end)
                throw syntax_error(tk[3].line, tk[3].col, "end of statement");
            raw_hamiltonian = tk[2];
        } else {
            throw syntax_error(head.line, head.col,
                               "'consts:', 'vars:', 'eq:', 'integral', 'poisson:' or 'hamiltonian:'");
        }
    }

    if (declared_vars.empty()) throw semantic_error("no 'vars:' declaration");
    if (equations.empty()) throw semantic_error("no 'eq:' statements");

    // Decide first-order vs companion mode.
    bool higher = false;
    for (const auto& e : equations)
        if (e.order >= 2) higher = true;

    SystemSpec out;
    out.name = name;
    out.consts = const_order;

    struct VarCtx {
        const std::vector<std::string>* vars;         // effective variable list
        const std::map<std::string, Scalar>* consts;
        // companion mode: base variable name; identifier w with q quotes maps
        // to effective variable index q. first-order mode: quotes forbidden.
        std::string base;
        int max_order = 0;  // companion mode: the equation order n
    };
    auto var_lookup = [](void* vctx, const Token& t, int order) -> RationalFn {
        const auto& ctx = *static_cast<VarCtx*>(vctx);
        int n = static_cast<int>(ctx.vars->size());
        if (t.text == "i") {
            if (order != 0) throw unsupported_derivative_order(t.line, order);
            return RationalFn(PhasePoly::constant(n, Scalar(0.0, 1.0)));
        }
        auto cit = ctx.consts->find(t.text);
        if (cit != ctx.consts->end()) {
            if (order != 0) throw unsupported_derivative_order(t.line, order);
            return RationalFn(PhasePoly::constant(n, cit->second));
        }
        if (!ctx.base.empty() && t.text == ctx.base) {
            if (order >= ctx.max_order) throw unsupported_derivative_order(t.line, order);
            return RationalFn(PhasePoly::variable(n, order));
        }
        if (order != 0) throw unsupported_derivative_order(t.line, order);
        for (int j = 0; j < n; ++j)
            if ((*ctx.vars)[static_cast<std::size_t>(j)] == t.text)
                return RationalFn(PhasePoly::variable(n, j));
        throw unbound_identifier(t.line, t.text);
    };

    VarCtx vctx;
    vctx.consts = &const_table;

    if (higher) {
        if (equations.size() != 1 || declared_vars.size() != 1)
            throw semantic_error("a higher-order equation must be the only equation "
                                 "of a single-variable system");
        const auto& eq = equations[0];
        if (eq.lhs.text != declared_vars[0])
            throw unbound_identifier(eq.lhs.line, eq.lhs.text);
        int order = eq.order;
        std::vector<std::string> companion;
        companion.reserve(static_cast<std::size_t>(order));
        for (int k = 1; k <= order; ++k) {
            std::string nm = declared_vars[0] + std::to_string(k);
            if (const_table.count(nm))
                throw semantic_error("companion variable '" + nm + "' collides with a constant");
            companion.push_back(nm);
        }
        vctx.vars = &companion;
        vctx.base = declared_vars[0];
        vctx.max_order = order;
        ExprParser p(eq.rhs.toks, 0, order, &vctx, var_lookup);
        RationalFn f = p.parse_expression();
        p.expect_end();
        SystemSpec companion_spec = reduce_nth_order(name, order, companion, f);
        out.vars = companion_spec.vars;
        out.rhs = companion_spec.rhs;
        vctx.base.clear();
        vctx.max_order = 0;
        // Integrals and brackets below are read over the companion variables:
        // identifier w' etc. would be ambiguous, so only companion names and
        // the base name (mapped to the first companion variable) are allowed.
    } else {
        out.vars = declared_vars;
        vctx.vars = &out.vars;
        out.rhs.resize(out.vars.size(), RationalFn(PhasePoly(out.n())));
        std::vector<bool> have(out.vars.size(), false);
        for (const auto& eq : equations) {
            int idx = -1;
            for (int j = 0; j < out.n(); ++j)
                if (out.vars[static_cast<std::size_t>(j)] == eq.lhs.text) idx = j;
            if (idx < 0) throw unbound_identifier(eq.lhs.line, eq.lhs.text);
            if (eq.order != 1) throw unsupported_derivative_order(eq.lhs.line, eq.order);
            if (have[static_cast<std::size_t>(idx)])
                throw semantic_error("two equations for variable '" + eq.lhs.text + "'");
            ExprParser p(eq.rhs.toks, 0, out.n(), &vctx, var_lookup);
            out.rhs[static_cast<std::size_t>(idx)] = p.parse_expression();
            p.expect_end();
            have[static_cast<std::size_t>(idx)] = true;
        }
        for (std::size_t j = 0; j < have.size(); ++j)
            if (!have[j])
                throw arity_mismatch("no equation for variable '" + out.vars[j] + "'");
    }

    if (higher) {
        // In companion mode the integral/poisson sections see the companion
        // variables; the bare base name means the first companion variable.
        vctx.vars = &out.vars;
        vctx.base = declared_vars[0];
        vctx.max_order = out.n();
    }

    for (const auto& [iname, body] : raw_integrals) {
        ExprParser p(body.toks, 0, out.n(), &vctx, var_lookup);
        RationalFn v = p.parse_expression();
        p.expect_end();
        out.integrals.emplace_back(iname, v.as_polynomial());
    }

    if (raw_poisson) {
        const auto& tkp = raw_poisson->toks;
        std::size_t p = 0;
        expect_op(tkp.at(p), "[");
        ++p;
        std::vector<std::vector<PhasePoly>> rows;
        for (;;) {
            expect_op(tkp.at(p), "[");
            ++p;
            std::vector<PhasePoly> row;
            for (;;) {
                ExprParser ep(tkp, p, out.n(), &vctx, var_lookup);
                RationalFn v = ep.parse_expression();
                p = ep.position();
                row.push_back(v.as_polynomial());
                if (tkp.at(p).kind == TokKind::op && tkp[p].text == ",") {
                    ++p;
                    continue;
                }
                break;
            }
            expect_op(tkp.at(p), "]");
            ++p;
            rows.push_back(std::move(row));
            if (tkp.at(p).kind == TokKind::op && tkp[p].text == ",") {
                ++p;
                continue;
            }
            break;
        }
        expect_op(tkp.at(p), "]");
        ++p;
        if (tkp.at(p).kind != TokKind::end)
            throw syntax_error(tkp[p].line, tkp[p].col, "end of statement");
        if (static_cast<int>(rows.size()) != out.n())
            throw dimension_mismatch("poisson matrix must be " + std::to_string(out.n())
                                     + "x" + std::to_string(out.n()));
        for (const auto& r : rows)
            if (static_cast<int>(r.size()) != out.n())
                throw dimension_mismatch("poisson matrix rows must have length "
                                         + std::to_string(out.n()));
        out.poisson = std::move(rows);
    }

    if (raw_hamiltonian) {
        if (!out.has_integral(raw_hamiltonian->text))
            throw unbound_identifier(raw_hamiltonian->line, raw_hamiltonian->text);
        out.hamiltonian = raw_hamiltonian->text;
    }

    return out;
}

// Canonical text form; parse(pretty_print(spec)) reproduces the spec
// structurally (constants appear already folded into coefficients).
inline std::string pretty_print(const SystemSpec& spec) {
    std::ostringstream os;
    os << "# " << spec.name << "\n";
    os << "vars: ";
    for (std::size_t j = 0; j < spec.vars.size(); ++j)
        os << (j ? ", " : "") << spec.vars[j];
    os << "\n";
    for (int iv = 0; iv < spec.n(); ++iv) {
        const auto& r = spec.rhs[static_cast<std::size_t>(iv)];
        os << "eq: " << spec.vars[static_cast<std::size_t>(iv)] << "' = ";
        if (r.is_polynomial())
            os << r.num().to_string(spec.vars);
        else
            os << "(" << r.num().to_string(spec.vars) << ") / ("
               << r.den().to_string(spec.vars) << ")";
        os << "\n";
    }
    for (const auto& [nm, h] : spec.integrals)
        os << "integral " << nm << " = " << h.to_string(spec.vars) << "\n";
    if (spec.poisson) {
        os << "poisson: [";
        for (std::size_t a = 0; a < spec.poisson->size(); ++a) {
            os << (a ? ", [" : "[");
            const auto& row = (*spec.poisson)[a];
            for (std::size_t b = 0; b < row.size(); ++b)
                os << (b ? ", " : "") << row[b].to_string(spec.vars);
            os << "]";
        }
        os << "]\n";
    }
    if (spec.hamiltonian) os << "hamiltonian: " << *spec.hamiltonian << "\n";
    return os.str();
}

}  // namespace qhode

#endif  // QHODE_PARSER_HPP
