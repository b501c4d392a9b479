// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qhode/qhode.hpp"
#include "test_util.hpp"

using qhode::Balance;
using qhode::Scalar;
using qhode::SystemSpec;
using qhode_test::find_balance;
using qhode_test::load_system;

namespace {

const Scalar kI(0.0, 1.0);

// The four leading-order triples of the rigid body, written through the
// principal square root exactly as the classical closed forms: with
// l = (1,2,3) the radicals are sqrt(-2) = i sqrt 2 and sqrt(1) = 1.
std::vector<std::vector<Scalar>> euler_case_triples() {
    const double l1 = 1.0, l2 = 2.0, l3 = 3.0;
    const Scalar r12 = std::sqrt(Scalar(l2 - l1));           // sqrt(l2-l1) = 1
    const Scalar r13 = std::sqrt(Scalar(l1 - l3));           // sqrt(l1-l3) = i sqrt 2
    const Scalar r23 = std::sqrt(Scalar(l3 - l2));           // sqrt(l3-l2) = 1
    std::vector<std::vector<Scalar>> cases;
    cases.push_back({Scalar(-1.0) / (r12 * r13), Scalar(1.0) / (r12 * r23),
                     Scalar(1.0) / (r13 * r23)});
    cases.push_back({Scalar(1.0) / (r12 * r13), Scalar(1.0) / (r12 * r23),
                     Scalar(-1.0) / (r13 * r23)});
    cases.push_back({Scalar(1.0) / (r12 * r13), Scalar(-1.0) / (r12 * r23),
                     Scalar(1.0) / (r13 * r23)});
    cases.push_back({Scalar(-1.0) / (r12 * r13), Scalar(-1.0) / (r12 * r23),
                     Scalar(-1.0) / (r13 * r23)});
    return cases;
}

}  // namespace

TEST_CASE("rigid body has exactly the four classical balances", "[balance]") {
    SystemSpec spec = load_system("euler");
    auto s = qhode::detect_weights(spec).value();
    auto bals = qhode::solve_balances(spec, s);
    REQUIRE(bals.size() == 4);
    for (const auto& b : bals) {
        CHECK_FALSE(b.continuum);
        CHECK(b.residual < 1e-9);
    }

    auto cases = euler_case_triples();
    // Spot values of case 1: (i/sqrt2, 1, -i/sqrt2).
    CHECK(std::abs(cases[0][0] - kI / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(cases[0][1] - Scalar(1.0)) < 1e-15);
    CHECK(std::abs(cases[0][2] + kI / std::sqrt(2.0)) < 1e-15);

    std::vector<int> found;
    for (const auto& c : cases) {
        int idx = find_balance(bals, c, 1e-9);
        REQUIRE(idx >= 0);
        found.push_back(idx);
    }
    // All four distinct: the list is exactly the four closed forms.
    std::sort(found.begin(), found.end());
    CHECK(found == std::vector<int>{0, 1, 2, 3});

    // Independent residual check through the balance map itself.
    for (const auto& b : bals) {
        auto g = qhode::detail::balance_g(spec, s, b.c0);
        CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("scalar quadratic balance", "[balance]") {
    SystemSpec spec = load_system("riccati");
    auto bals = qhode::solve_balances(spec, {1});
    REQUIRE(bals.size() == 1);
    CHECK(std::abs(bals[0].c0(0) - Scalar(-1.0)) < 1e-12);
}

TEST_CASE("companion elliptic balance", "[balance]") {
    SystemSpec spec = load_system("weierstrass");
    auto bals = qhode::solve_balances(spec, {2, 3});
    REQUIRE(bals.size() == 1);
    CHECK(std::abs(bals[0].c0(0) - Scalar(1.0)) < 1e-10);
    CHECK(std::abs(bals[0].c0(1) - Scalar(-2.0)) < 1e-10);
}

TEST_CASE("heavy top census: two certified lines, two isolated points", "[balance]") {
    SystemSpec spec = load_system("kowalewski");
    std::vector<int> s{1, 1, 1, 2, 2, 2};
    auto bals = qhode::solve_balances(spec, s);
    REQUIRE(bals.size() == 4);
    CHECK(bals[0].continuum);
    CHECK(bals[1].continuum);
    CHECK_FALSE(bals[2].continuum);
    CHECK_FALSE(bals[3].continuum);

    // One of the lines passes through (2, 2i, i, 1/2, i/2, 0) at a = 2.
    int hit = -1;
    for (int b = 0; b < 2; ++b) {
        qhode::Vector p = bals[static_cast<std::size_t>(b)].at(Scalar(2.0));
        qhode::Vector want(6);
        want << Scalar(2.0), Scalar(0.0, 2.0), kI, Scalar(0.5), Scalar(0.0, 0.5), Scalar(0.0);
        if ((p - want).cwiseAbs().maxCoeff() < 1e-9) hit = b;
    }
    REQUIRE(hit >= 0);
    const Balance& line = bals[static_cast<std::size_t>(hit)];
    CHECK(line.pivot == 0);
    CHECK(std::abs(line.dir(0) - Scalar(1.0)) < 1e-12);
    CHECK(std::abs(line.base(0)) < 1e-12);

    // Certified for all pin values: the balance map vanishes at a generic
    // complex point of each line.
    for (int b = 0; b < 2; ++b) {
        qhode::Vector p = bals[static_cast<std::size_t>(b)].at(Scalar(0.7, 0.3));
        auto g = qhode::detail::balance_g(spec, s, p);
        CHECK(g.cwiseAbs().maxCoeff() < 1e-9);
    }

    // Pinning freezes the leading vector.
    Balance pinned = qhode::pin_family(line, Scalar(2.0));
    CHECK(std::abs(pinned.c0(0) - Scalar(2.0)) < 1e-12);
    CHECK(std::abs(pinned.c0(2) - kI) < 1e-12);

    // The isolated balances are the two m2-axis points (0, ±2i, 0, 1, 0, -/+ i).
    int iso_plus = find_balance(bals, {Scalar(0.0), Scalar(0.0, 2.0), Scalar(0.0),
                                       Scalar(1.0), Scalar(0.0), Scalar(0.0, -1.0)});
    int iso_minus = find_balance(bals, {Scalar(0.0), Scalar(0.0, -2.0), Scalar(0.0),
                                        Scalar(1.0), Scalar(0.0), Scalar(0.0, 1.0)});
    CHECK(iso_plus >= 2);
    CHECK(iso_minus >= 2);
    CHECK(iso_plus != iso_minus);
}

TEST_CASE("balance search is deterministic and seed-stable", "[balance][property]") {
    SystemSpec spec = load_system("euler");
    qhode::BalanceOptions opt;
    auto a = qhode::solve_balances(spec, {1, 1, 1}, opt);
    auto b = qhode::solve_balances(spec, {1, 1, 1}, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK((a[j].c0 - b[j].c0).cwiseAbs().maxCoeff() == 0.0);

    // A different seed finds the same set (the roots are intrinsic).
    qhode::BalanceOptions opt2;
    opt2.seed = 0x5eed;
    auto c = qhode::solve_balances(spec, {1, 1, 1}, opt2);
    REQUIRE(c.size() == a.size());
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK((a[j].c0 - c[j].c0).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("a system with only the zero balance reports failure", "[balance][errors]") {
    SystemSpec spec = qhode::parse_system("vars: w\neq: w' = 0\n");
    CHECK_THROWS_AS(qhode::solve_balances(spec, {1}), qhode::no_balance_found);
}
