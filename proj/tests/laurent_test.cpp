// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "qhode/qhode.hpp"
#include "test_util.hpp"

using qhode::Balance;
using qhode::LaurentSolution;
using qhode::ParamPoly;
using qhode::PhasePoly;
using qhode::Scalar;
using qhode::SystemSpec;
using qhode::ZSeries;
using qhode_test::find_balance;
using qhode_test::load_system;

namespace {

const Scalar kI(0.0, 1.0);

// Indicator evaluation: the coefficient of parameter `p` in an (affine
// linear) parameter polynomial.
Scalar linear_coeff(const ParamPoly& poly, const std::string& p) {
    std::map<std::string, Scalar> at;
    for (const auto& q : poly.params()) at[q] = (q == p) ? Scalar(1.0) : Scalar(0.0);
    std::map<std::string, Scalar> zero;
    for (const auto& q : poly.params()) zero[q] = Scalar(0.0);
    return poly.eval(at) - poly.eval(zero);
}

// The names of the order-2 parameters pivoted on m2 and m3 respectively.
std::pair<std::string, std::string> euler_param_names(const LaurentSolution& sol) {
    REQUIRE(sol.parameters.size() == 2);
    std::string b2, c2;
    for (const auto& p : sol.parameters) {
        Scalar in_m2 = linear_coeff(sol.coeff[2][1], p);
        Scalar in_m3 = linear_coeff(sol.coeff[2][2], p);
        if (std::abs(in_m2 - Scalar(1.0)) < 1e-10 && std::abs(in_m3) < 1e-10) b2 = p;
        if (std::abs(in_m3 - Scalar(1.0)) < 1e-10 && std::abs(in_m2) < 1e-10) c2 = p;
    }
    REQUIRE_FALSE(b2.empty());
    REQUIRE_FALSE(c2.empty());
    REQUIRE(b2 != c2);
    return {b2, c2};
}

}  // namespace

TEST_CASE("rigid body expansion: zero first order, pivoted second order", "[laurent]") {
    SystemSpec spec = load_system("euler");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    REQUIRE(bals.size() == 4);
    const double r2 = std::sqrt(2.0);

    for (const auto& b : bals) {
        LaurentSolution sol = qhode::expand(spec, {1, 1, 1}, b, 6);
        REQUIRE(sol.order == 6);
        REQUIRE(sol.coeff.size() == 7);

        // No resonance at k = 1: the first correction vanishes identically.
        for (int i = 0; i < 3; ++i) CHECK(sol.coeff[1][static_cast<std::size_t>(i)].is_zero(1e-10));

        // Two free parameters enter at the double resonance k = 2.
        REQUIRE(sol.parameters.size() == 2);
        for (const auto& [nm, k] : sol.parameter_orders) CHECK(k == 2);

        auto [b2, c2] = euler_param_names(sol);

        // The classical second-order relation in the first variable:
        //   a2 = sc * sqrt(l3-l2)/sqrt(l1-l3) * b2 + sb * sqrt(l3-l2)/sqrt(l2-l1) * c2,
        // with sc, sb the signs the leading vector picked for m3 and m2. At
        // l = (1,2,3): sqrt(l3-l2)/sqrt(l1-l3) = -i/sqrt2 and the other ratio 1.
        const Scalar sb = b.c0(1).real() > 0 ? Scalar(1.0) : Scalar(-1.0);
        const Scalar sc = b.c0(2).imag() < 0 ? Scalar(1.0) : Scalar(-1.0);
        ParamPoly expect = ParamPoly::parameter(b2, sc * (-kI / r2)) + ParamPoly::parameter(c2, sb);
        CHECK(sol.coeff[2][0].almost_equal_to(expect, 1e-9));
    }
}

TEST_CASE("scalar quadratic expansion terminates at the leading term", "[laurent]") {
    SystemSpec spec = load_system("riccati");
    auto bals = qhode::solve_balances(spec, {1});
    LaurentSolution sol = qhode::expand(spec, {1}, bals[0], 10);
    CHECK(sol.parameters.empty());
    CHECK(std::abs(sol.coeff[0][0].constant_value() - Scalar(-1.0)) < 1e-12);
    for (int m = 1; m <= 10; ++m) CHECK(sol.coeff[static_cast<std::size_t>(m)][0].is_zero(1e-12));

    // The instantiated series is exactly w = -1/z.
    auto ns = qhode::instantiate(sol, {});
    Scalar z(0.03, 0.02);
    CHECK(std::abs(ns.eval(z)[0] + Scalar(1.0) / z) < 1e-12);
    CHECK(qhode::series_residual(spec, ns) < 1e-12);
}

TEST_CASE("series residual detects both truncation and corruption", "[laurent]") {
    SystemSpec spec = load_system("euler");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    LaurentSolution sol = qhode::expand(spec, {1, 1, 1}, bals[0], 12);

    qhode::Rng rng(0x5e51d);
    for (int d = 0; d < 3; ++d) {
        std::map<std::string, Scalar> draw;
        for (const auto& p : sol.parameters) draw[p] = rng.complex_box(1.0);
        auto ns = qhode::instantiate(sol, draw);
        double r = qhode::series_residual(spec, ns);
        CHECK(r < 1e-8);

        // Corrupting one mid-order coefficient must be visible.
        auto bad = ns;
        bad.a[3][0] += Scalar(1e-3);
        CHECK(qhode::series_residual(spec, bad) > 1e-5);
    }
}

TEST_CASE("parameter census matches the resonance census", "[laurent][property]") {
    for (const char* nm : {"euler", "kowalewski", "riccati", "weierstrass"}) {
        SystemSpec spec = load_system(nm);
        auto s = qhode::detect_weights(spec).value();
        auto bals = qhode::solve_balances(spec, s);
        for (const auto& b : bals) {
            Balance use = b.continuum ? qhode::pin_family(b, Scalar(2.0)) : b;
            LaurentSolution sol = qhode::expand(spec, s, use, 8);
            auto info = qhode::resonance_info(spec, s, use);
            int expected = 0;
            for (const auto& [k, dim] : info.kernel_dim)
                if (k >= 1 && k <= 8) expected += dim;
            CHECK(static_cast<int>(sol.parameters.size()) == expected);
            // Parameter names encode their resonance order.
            for (const auto& [pname, k] : sol.parameter_orders) {
                CHECK(info.kernel_dim.count(k) == 1);
                CHECK(pname.rfind("p" + std::to_string(k), 0) == 0);
            }
        }
    }
}

TEST_CASE("composed observables have the predicted principal parts", "[laurent]") {
    SystemSpec spec = load_system("euler");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    const double r2 = std::sqrt(2.0);
    int idx = find_balance(bals, {kI / r2, Scalar(1.0), -kI / r2});
    REQUIRE(idx >= 0);
    LaurentSolution sol = qhode::expand(spec, {1, 1, 1}, bals[static_cast<std::size_t>(idx)], 8);

    // g = m2: a simple pole with residue b0 = 1.
    auto m2 = qhode::compose_series(sol, PhasePoly::variable(3, 1));
    CHECK(m2.low == -1);
    REQUIRE(m2.in_range(-1));
    CHECK(std::abs(m2.at(-1).constant_value() - Scalar(1.0)) < 1e-10);

    // g = H1: all negative orders cancel for a first integral.
    auto h1 = qhode::compose_series(sol, spec.integral("H1"));
    CHECK(h1.low == -2);
    CHECK(h1.at(-2).is_zero(1e-10));
    CHECK(h1.at(-1).is_zero(1e-10));
    CHECK_FALSE(h1.at(0).is_zero(1e-10));
}

TEST_CASE("an incompatible projection raises a structured obstruction", "[laurent][errors]") {
    // Hand-built stacked-resonance system: eigenvalues {-1, 1, 2} at the
    // balance (1, 0, 0); the order-1 kernel direction feeds an order-2
    // projection that cannot be cancelled.
    SystemSpec spec = qhode::parse_system(
        "vars: w1, w2, w3\n"
        "eq: w1' = -w1^2 + 2*w1*w2\n"
        "eq: w2' = 0\n"
        "eq: w3' = w1*w3 + w2^2\n");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    REQUIRE(bals.size() == 1);
    CHECK(std::abs(bals[0].c0(0) - Scalar(1.0)) < 1e-10);

    try {
        qhode::expand(spec, {1, 1, 1}, bals[0], 6);
        FAIL("expected compatibility_obstruction");
    } catch (const qhode::compatibility_obstruction& e) {
        CHECK(e.k == 2);
        CHECK(e.monomial == "p1^2");
        CHECK(std::abs(e.witness) > 0.1);
    }
}

TEST_CASE("recursion right-hand side equals the direct Taylor sum", "[laurent][oracle]") {
    // Two-variable quadratic toy. For each order k, the recursion feeds
    // -[z^k] f(u_{<k}); compare that composition against the explicit
    // multi-index Taylor sum of f about the leading vector.
    SystemSpec spec = qhode::parse_system("vars: w1, w2\neq: w1' = w2^2\neq: w2' = w1*w2\n");
    auto bals = qhode::solve_balances(spec, {1, 1});
    int idx = find_balance(bals, {Scalar(-1.0), Scalar(1.0)});
    REQUIRE(idx >= 0);
    const Balance& b = bals[static_cast<std::size_t>(idx)];

    const int top = 6;
    LaurentSolution sol = qhode::expand(spec, {1, 1}, b, top);
    REQUIRE(sol.parameters.size() == 1);
    std::map<std::string, Scalar> draw{{sol.parameters[0], Scalar(0.37, -0.21)}};
    auto ns = qhode::instantiate(sol, draw);

    auto f = spec.rhs_polynomials();
    auto c0 = qhode::from_vector(b.c0);

    for (int k = 1; k <= top; ++k) {
        // Composition side, exactly as the recursion builds it.
        std::vector<ZSeries> u;
        for (int i = 0; i < 2; ++i) u.push_back(sol.u_truncated(i, k, k));
        ZSeries one = ZSeries::one(k);

        for (int i = 0; i < 2; ++i) {
            Scalar comp = f[static_cast<std::size_t>(i)]
                              .eval_generic<ZSeries>(u, one)
                              .at(k)
                              .eval(draw);

            // Direct side: sum over multi-indices alpha of
            //   (d^alpha f_i)(c0) / alpha! * [z^k] v^alpha,
            // with v_j = sum_{r=1}^{k-1} c_j^(r) z^r instantiated numerically.
            std::vector<std::vector<Scalar>> v(2, std::vector<Scalar>(static_cast<std::size_t>(k + 1), Scalar(0.0)));
            for (int j = 0; j < 2; ++j)
                for (int r = 1; r < k; ++r) v[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)] = ns.a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];

            auto convolve = [k](const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
                std::vector<Scalar> out(static_cast<std::size_t>(k + 1), Scalar(0.0));
                for (int p = 0; p <= k; ++p)
                    for (int q = 0; p + q <= k; ++q)
                        out[static_cast<std::size_t>(p + q)] += x[static_cast<std::size_t>(p)] * y[static_cast<std::size_t>(q)];
                return out;
            };

            Scalar direct(0.0);
            for (int a1 = 0; a1 <= 2; ++a1)
                for (int a2 = 0; a1 + a2 <= 2; ++a2) {
                    qhode::Exponents alpha{a1, a2};
                    PhasePoly d = f[static_cast<std::size_t>(i)].diff_multi(alpha);
                    if (d.is_zero()) continue;
                    Scalar lead = d.eval(c0) / Scalar(qhode::multi_factorial(alpha));
                    std::vector<Scalar> prod(static_cast<std::size_t>(k + 1), Scalar(0.0));
                    prod[0] = Scalar(1.0);
                    for (int r = 0; r < a1; ++r) prod = convolve(prod, v[0]);
                    for (int r = 0; r < a2; ++r) prod = convolve(prod, v[1]);
                    direct += lead * prod[static_cast<std::size_t>(k)];
                }

            CHECK(std::abs(comp - direct) < 1e-10);
        }
    }
}

TEST_CASE("coefficients carry the scaling grading", "[laurent][property]") {
    // Rescaling z multiplies c^(m) by delta^m; on the parameter side this is
    // the rescaling p -> delta^k p of a parameter born at order k. Checked
    // numerically: evaluating c^(m) at the scaled draw equals delta^m times
    // the value at the original draw.
    SystemSpec spec = load_system("euler");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    LaurentSolution sol = qhode::expand(spec, {1, 1, 1}, bals[3], 6);

    const Scalar delta(0.8, 0.3);
    qhode::Rng rng(0x5ca1e5ull);
    for (int trial = 0; trial < 3; ++trial) {
        std::map<std::string, Scalar> draw, scaled;
        for (const auto& [pname, k] : sol.parameter_orders) {
            Scalar v = rng.complex_box(1.0);
            draw[pname] = v;
            scaled[pname] = std::pow(delta, k) * v;
        }
        for (int m = 0; m <= 6; ++m) {
            Scalar dm = std::pow(delta, m);
            for (int i = 0; i < 3; ++i) {
                const ParamPoly& c =
                    sol.coeff[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
                CHECK(std::abs(c.eval(scaled) - dm * c.eval(draw)) < 1e-9);
            }
        }
    }
}

TEST_CASE("laurent series container arithmetic", "[laurent]") {
    ZSeries a(3), b(3);
    a.set(0, ParamPoly::constant(Scalar(1.0)));
    a.set(1, ParamPoly::parameter("t"));
    b.set(1, ParamPoly::constant(Scalar(2.0)));
    b.set(3, ParamPoly::parameter("t"));

    ZSeries sum = a + b;
    CHECK(std::abs(sum.at(1).eval({{"t", Scalar(3.0)}}) - Scalar(5.0)) < 1e-14);

    ZSeries prod = a * b;
    CHECK(prod.at(0).is_zero());
    CHECK(std::abs(prod.at(1).eval({{"t", Scalar(3.0)}}) - Scalar(2.0)) < 1e-14);
    // [z^2] = 2t; [z^3] = t (from 1 * t z^3).
    CHECK(std::abs(prod.at(2).eval({{"t", Scalar(3.0)}}) - Scalar(6.0)) < 1e-14);
    CHECK(std::abs(prod.at(3).eval({{"t", Scalar(3.0)}}) - Scalar(3.0)) < 1e-14);

    ZSeries scaled = a * Scalar(2.0);
    CHECK(std::abs(scaled.at(0).constant_value() - Scalar(2.0)) < 1e-14);
}
