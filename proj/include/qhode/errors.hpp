// qhode/errors.hpp
//
// Exception hierarchy for the qhode library. Every structured failure the
// library can report derives from qhode::error so callers can catch one type
// at the boundary; specific types carry the data a caller needs to act
// (source position, offending order, witness values, ...).
//
// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#ifndef QHODE_ERRORS_HPP
#define QHODE_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace qhode {

class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// ---- parsing -------------------------------------------------------------

class syntax_error : public error {
public:
    syntax_error(int line, int col, const std::string& expected)
        : error("syntax error at line " + std::to_string(line) + ", column "
                + std::to_string(col) + ": expected " + expected),
          line(line), col(col), expected(expected) {}
    int line;
    int col;
    std::string expected;
};

class unbound_identifier : public error {
public:
    unbound_identifier(int line, const std::string& name)
        : error("unbound identifier '" + name + "' at line " + std::to_string(line)),
          line(line), name(name) {}
    int line;
    std::string name;
};

class arity_mismatch : public error {
public:
    explicit arity_mismatch(const std::string& what) : error(what) {}
};

class unsupported_derivative_order : public error {
public:
    unsupported_derivative_order(int line, int order)
        : error("derivative of order " + std::to_string(order)
                + " not representable here (line " + std::to_string(line) + ")"),
          line(line), order(order) {}
    int line;
    int order;
};

class dimension_mismatch : public error {
public:
    explicit dimension_mismatch(const std::string& what) : error(what) {}
};

class missing_poisson : public error {
public:
    missing_poisson() : error("operation requires a Poisson matrix, none declared") {}
};

class semantic_error : public error {
public:
    explicit semantic_error(const std::string& what) : error(what) {}
};

// ---- algebra / numerics ---------------------------------------------------

class division_by_zero : public error {
public:
    explicit division_by_zero(const std::string& what) : error(what) {}
};

class no_balance_found : public error {
public:
    explicit no_balance_found(const std::string& what) : error(what) {}
};

class ill_conditioned : public error {
public:
    explicit ill_conditioned(const std::string& what) : error(what) {}
};

// Resonance at order k whose right-hand side has a component outside the
// range of (L - k I): the formal Laurent series does not close.
class compatibility_obstruction : public error {
public:
    compatibility_obstruction(int k, std::complex<double> witness,
                              const std::string& monomial)
        : error("compatibility obstruction at order k=" + std::to_string(k)
                + " (projection modulus " + std::to_string(std::abs(witness))
                + " on parameter monomial '" + monomial + "')"),
          k(k), witness(witness), monomial(monomial) {}
    int k;
    std::complex<double> witness;
    std::string monomial;
};

class not_expanded_far_enough : public error {
public:
    explicit not_expanded_far_enough(const std::string& what) : error(what) {}
};

class no_positive_root : public error {
public:
    explicit no_positive_root(const std::string& what) : error(what) {}
};

class not_constant : public error {
public:
    not_constant(int order, const std::string& monomial, double modulus)
        : error("composed integral has nonzero coefficient at z^" + std::to_string(order)
                + " (parameter monomial '" + monomial + "', modulus "
                + std::to_string(modulus) + ")"),
          order(order), monomial(monomial), modulus(modulus) {}
    int order;
    std::string monomial;
    double modulus;
};

class family_ambiguous : public error {
public:
    explicit family_ambiguous(const std::string& what) : error(what) {}
};

class pole_too_deep : public error {
public:
    pole_too_deep(int component, int order)
        : error("component " + std::to_string(component) + " has a pole of order "
                + std::to_string(-order) + " (deeper than a simple pole)"),
          component(component), order(order) {}
    int component;
    int order;
};

class blow_up : public error {
public:
    blow_up(std::complex<double> where, const std::string& what)
        : error(what), where(where) {}
    std::complex<double> where;
};

class stiffness_failure : public error {
public:
    explicit stiffness_failure(const std::string& what) : error(what) {}
};

class modulus_out_of_range : public error {
public:
    explicit modulus_out_of_range(const std::string& what) : error(what) {}
};

class invalid_regime : public error {
public:
    explicit invalid_regime(const std::string& what) : error(what) {}
};

}  // namespace qhode

#endif  // QHODE_ERRORS_HPP
