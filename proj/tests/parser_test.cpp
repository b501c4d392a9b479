// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "qhode/qhode.hpp"
#include "test_util.hpp"

using qhode::PhasePoly;
using qhode::RationalFn;
using qhode::Scalar;
using qhode::SystemSpec;
using qhode_test::load_system;

TEST_CASE("bundled rigid-body file parses with full structure", "[parser]") {
    SystemSpec spec = load_system("euler");
    REQUIRE(spec.n() == 3);
    CHECK(spec.vars == std::vector<std::string>{"m1", "m2", "m3"});
    REQUIRE(spec.consts.size() == 3);
    CHECK(spec.consts[0].first == "l1");
    CHECK(std::abs(spec.consts[2].second - Scalar(3.0)) < 1e-15);
    CHECK(spec.rhs_is_polynomial());
    CHECK(spec.has_integral("H1"));
    CHECK(spec.has_integral("H2"));
    REQUIRE(spec.hamiltonian.has_value());
    CHECK(*spec.hamiltonian == "H1");
    REQUIRE(spec.poisson.has_value());

    // rhs[0] = (l3 - l2) m2 m3 = m2 m3 with the bundled constants.
    PhasePoly expect = PhasePoly::variable(3, 1) * PhasePoly::variable(3, 2);
    CHECK(spec.rhs[0].as_polynomial().almost_equal_to(expect, 1e-14));
    // rhs[1] = (l1 - l3) m1 m3 = -2 m1 m3.
    PhasePoly expect1 = Scalar(-2.0) * (PhasePoly::variable(3, 0) * PhasePoly::variable(3, 2));
    CHECK(spec.rhs[1].as_polynomial().almost_equal_to(expect1, 1e-14));
}

TEST_CASE("bundled heavy-top file parses", "[parser]") {
    SystemSpec spec = load_system("kowalewski");
    REQUIRE(spec.n() == 6);
    CHECK(spec.integrals.size() == 4);
    CHECK(spec.rhs_is_polynomial());
    REQUIRE(spec.poisson.has_value());
}

TEST_CASE("inline one-liner systems parse", "[parser]") {
    SystemSpec a = qhode::parse_system("vars: w\neq: w' = w^2\n");
    REQUIRE(a.n() == 1);
    CHECK(a.rhs[0].as_polynomial().almost_equal_to(
        PhasePoly::variable(1, 0) * PhasePoly::variable(1, 0), 1e-14));

    // Semicolons work as statement separators.
    SystemSpec b = qhode::parse_system("vars: w; eq: w' = w^2;");
    REQUIRE(b.n() == 1);
    CHECK(b.rhs[0].as_polynomial().almost_equal_to(a.rhs[0].as_polynomial(), 1e-14));
}

TEST_CASE("imaginary unit and comments in system files", "[parser]") {
    SystemSpec spec = qhode::parse_system(
        "# complex constant\n"
        "consts: c = 2 + i   # trailing comment\n"
        "vars: w\n"
        "eq: w' = c * w^2\n");
    REQUIRE(spec.n() == 1);
    Scalar v = spec.rhs[0].as_polynomial().eval({Scalar(1.0)});
    CHECK(std::abs(v - Scalar(2.0, 1.0)) < 1e-15);
}

TEST_CASE("higher-order equations reduce to companion chains", "[parser]") {
    // Second order: the classical w'' = 6 w^2 becomes (w1' = w2, w2' = 6 w1^2).
    SystemSpec a = qhode::parse_system("vars: w\neq: w'' = 6*w^2\n");
    REQUIRE(a.n() == 2);
    CHECK(a.vars == std::vector<std::string>{"w1", "w2"});
    CHECK(a.rhs[0].as_polynomial().almost_equal_to(PhasePoly::variable(2, 1), 1e-14));
    CHECK(a.rhs[1].as_polynomial().almost_equal_to(
        Scalar(6.0) * (PhasePoly::variable(2, 0) * PhasePoly::variable(2, 0)), 1e-14));
    auto s = qhode::detect_weights(a);
    REQUIRE(s.has_value());
    CHECK(*s == std::vector<int>{2, 3});

    // Third order with a derivative on the right-hand side.
    SystemSpec b = qhode::parse_system("vars: w\neq: w''' = w * w'\n");
    REQUIRE(b.n() == 3);
    CHECK(b.rhs[0].as_polynomial().almost_equal_to(PhasePoly::variable(3, 1), 1e-14));
    CHECK(b.rhs[1].as_polynomial().almost_equal_to(PhasePoly::variable(3, 2), 1e-14));
    CHECK(b.rhs[2].as_polynomial().almost_equal_to(
        PhasePoly::variable(3, 0) * PhasePoly::variable(3, 1), 1e-14));

    // Chain shape invariant: rhs[j] == next variable for j < n-1.
    SystemSpec c = qhode::parse_system("vars: u\neq: u'''' = u^2 + u'\n");
    REQUIRE(c.n() == 4);
    for (int j = 0; j + 1 < c.n(); ++j)
        CHECK(c.rhs[static_cast<std::size_t>(j)].as_polynomial().almost_equal_to(
            PhasePoly::variable(4, j + 1), 1e-14));
}

TEST_CASE("hamiltonian field reproduces the declared right-hand side", "[parser][poisson]") {
    SystemSpec spec = load_system("euler");
    auto field = qhode::hamiltonian_to_field(spec, spec.integral("H1"));
    REQUIRE(field.size() == 3);
    for (int j = 0; j < 3; ++j)
        CHECK(field[static_cast<std::size_t>(j)].almost_equal_to(
            spec.rhs[static_cast<std::size_t>(j)].as_polynomial(), 1e-12));

    // A zero bracket produces the zero field.
    SystemSpec z = qhode::parse_system(
        "vars: a, b\n"
        "eq: a' = b\n"
        "eq: b' = a\n"
        "integral H = a^2\n"
        "poisson: [[0, 0], [0, 0]]\n");
    auto zero_field = qhode::hamiltonian_to_field(z, z.integral("H"));
    for (const auto& f : zero_field) CHECK(f.is_zero());

    // Without a Poisson matrix the operation is rejected.
    SystemSpec noj = qhode::parse_system("vars: w\neq: w' = w^2\nintegral H = w\n");
    CHECK_THROWS_AS(qhode::hamiltonian_to_field(noj, noj.integral("H")), qhode::missing_poisson);
}

TEST_CASE("poisson audit on the bundled systems", "[parser][poisson]") {
    SystemSpec euler = load_system("euler");
    auto rep = qhode::poisson_audit(euler);
    CHECK(rep.has_poisson);
    CHECK(rep.antisymmetric);
    CHECK(rep.jacobi_ok);
    CHECK(rep.max_jacobi_residual < 1e-12);
    REQUIRE(rep.field_matches_rhs.has_value());
    CHECK(*rep.field_matches_rhs);
    CHECK(rep.all_ok());
    // The squared momentum is the Casimir of so(3); the energy is not.
    bool h1_cas = true, h2_cas = false;
    for (const auto& [nm, flag] : rep.casimir) {
        if (nm == "H1") h1_cas = flag;
        if (nm == "H2") h2_cas = flag;
    }
    CHECK_FALSE(h1_cas);
    CHECK(h2_cas);
    for (const auto& [pr, flag] : rep.involution) CHECK(flag);

    SystemSpec kow = load_system("kowalewski");
    auto krep = qhode::poisson_audit(kow);
    CHECK(krep.all_ok());
    int casimirs = 0;
    for (const auto& [nm, flag] : krep.casimir)
        if (flag) ++casimirs;
    CHECK(casimirs == 2);  // m.g and |g|^2

    // Lie derivative of any declared integral along the field vanishes.
    auto f = euler.rhs_polynomials();
    for (const auto& [nm, h] : euler.integrals)
        CHECK(qhode::lie_derivative(f, h).is_zero());
}

TEST_CASE("constant symplectic structure passes the audit", "[parser][poisson]") {
    SystemSpec spec = qhode::parse_system(
        "vars: q, p\n"
        "eq: q' = p\n"
        "eq: p' = -q^3\n"
        "integral H = 0.5*p^2 + 0.25*q^4\n"
        "hamiltonian: H\n"
        "poisson: [[0, 1], [-1, 0]]\n");
    auto rep = qhode::poisson_audit(spec);
    CHECK(rep.all_ok());
    REQUIRE(rep.field_matches_rhs.has_value());
    CHECK(*rep.field_matches_rhs);
}

TEST_CASE("pretty print round-trips structurally", "[parser]") {
    for (const char* nm : {"euler", "kowalewski", "riccati", "weierstrass"}) {
        SystemSpec spec = load_system(nm);
        SystemSpec again = qhode::parse_system(qhode::pretty_print(spec), spec.name);
        REQUIRE(again.n() == spec.n());
        CHECK(again.vars == spec.vars);
        for (std::size_t j = 0; j < spec.rhs.size(); ++j) {
            CHECK(again.rhs[j].num().almost_equal_to(spec.rhs[j].num(), 1e-12));
            CHECK(again.rhs[j].den().almost_equal_to(spec.rhs[j].den(), 1e-12));
        }
        REQUIRE(again.integrals.size() == spec.integrals.size());
        for (std::size_t j = 0; j < spec.integrals.size(); ++j) {
            CHECK(again.integrals[j].first == spec.integrals[j].first);
            CHECK(again.integrals[j].second.almost_equal_to(spec.integrals[j].second, 1e-12));
        }
        CHECK(again.poisson.has_value() == spec.poisson.has_value());
        CHECK(again.hamiltonian == spec.hamiltonian);
    }
}

TEST_CASE("parse errors carry location and kind", "[parser][errors]") {
    // Unknown token where an expression was expected.
    try {
        qhode::parse_system("vars: w\neq: w' = w +* 2\n");
        FAIL("expected syntax_error");
    } catch (const qhode::syntax_error& e) {
        CHECK(e.line == 2);
        CHECK(e.col > 0);
        CHECK_FALSE(e.expected.empty());
    }

    // Unbound identifier on the right-hand side.
    try {
        qhode::parse_system("vars: w\neq: w' = q * w\n");
        FAIL("expected unbound_identifier");
    } catch (const qhode::unbound_identifier& e) {
        CHECK(e.name == "q");
        CHECK(e.line == 2);
    }

    // Two equations for one variable.
    CHECK_THROWS_AS(qhode::parse_system("vars: w\neq: w' = w\neq: w' = w^2\n"),
                    qhode::semantic_error);

    // Missing equation for a declared variable.
    CHECK_THROWS_AS(qhode::parse_system("vars: a, b\neq: a' = b\n"), qhode::arity_mismatch);

    // Duplicate constant.
    CHECK_THROWS_AS(qhode::parse_system("consts: c = 1, c = 2\nvars: w\neq: w' = c*w\n"),
                    qhode::semantic_error);

    // Derivative order beyond the declared equation order on the rhs.
    CHECK_THROWS_AS(qhode::parse_system("vars: w\neq: w'' = w'''\n"),
                    qhode::unsupported_derivative_order);
}
