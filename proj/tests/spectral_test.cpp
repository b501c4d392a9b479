// Copyright (c) 2026 the qhode authors. Distributed under the MIT License.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "qhode/qhode.hpp"
#include "test_util.hpp"

using qhode::Balance;
using qhode::Matrix;
using qhode::Scalar;
using qhode::SystemSpec;
using qhode::Vector;
using qhode_test::find_balance;
using qhode_test::load_system;

namespace {

const Scalar kI(0.0, 1.0);

// Sorted spectrum equals the given list of integers, within tol.
void check_integer_spectrum(const std::vector<Scalar>& spectrum, std::vector<double> want,
                            double tol = 1e-8) {
    REQUIRE(spectrum.size() == want.size());
    std::vector<double> re(spectrum.size());
    for (std::size_t j = 0; j < spectrum.size(); ++j) {
        CHECK(std::abs(spectrum[j].imag()) < tol);
        re[j] = spectrum[j].real();
    }
    std::sort(re.begin(), re.end());
    std::sort(want.begin(), want.end());
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(std::abs(re[j] - want[j]) < tol);
}

}  // namespace

TEST_CASE("scalar quadratic has the one-by-one matrix [-1]", "[spectral]") {
    SystemSpec spec = load_system("riccati");
    auto bals = qhode::solve_balances(spec, {1});
    Matrix l = qhode::kowalevski_matrix(spec, {1}, bals[0].c0);
    REQUIRE(l.rows() == 1);
    CHECK(std::abs(l(0, 0) - Scalar(-1.0)) < 1e-12);
    auto info = qhode::resonance_info(spec, {1}, bals[0]);
    CHECK(info.minus_one_present);
    CHECK(info.resonances.empty());
    CHECK(info.family_parameters == 0);
}

TEST_CASE("rigid body variational matrix at the first classical balance", "[spectral]") {
    SystemSpec spec = load_system("euler");
    auto bals = qhode::solve_balances(spec, {1, 1, 1});
    const double r2 = std::sqrt(2.0);
    int idx = find_balance(bals, {kI / r2, Scalar(1.0), -kI / r2});
    REQUIRE(idx >= 0);
    Matrix l = qhode::kowalevski_matrix(spec, {1, 1, 1}, bals[static_cast<std::size_t>(idx)].c0);

    Matrix want(3, 3);
    want << Scalar(1.0), -kI / r2, Scalar(1.0),
            kI * r2, Scalar(1.0), -kI * r2,
            Scalar(1.0), kI / r2, Scalar(1.0);
    CHECK((l - want).cwiseAbs().maxCoeff() < 1e-10);

    auto info = qhode::resonance_info(spec, {1, 1, 1}, bals[static_cast<std::size_t>(idx)]);
    check_integer_spectrum(info.spectrum, {-1.0, 2.0, 2.0});
    CHECK(std::abs(l.trace() - Scalar(3.0)) < 1e-10);
    CHECK(std::abs(l.determinant() - Scalar(-4.0)) < 1e-9);
    CHECK(info.minus_one_present);
    CHECK(info.resonances == std::vector<int>{2});
    CHECK(info.kernel_dim.at(2) == 2);
    CHECK(info.family_parameters == 2);
    CHECK(info.near_resonances.empty());

    // Every rigid-body balance shares the spectrum {-1, 2, 2}.
    for (const auto& b : bals) {
        auto bi = qhode::resonance_info(spec, {1, 1, 1}, b);
        check_integer_spectrum(bi.spectrum, {-1.0, 2.0, 2.0});
        CHECK(bi.family_parameters == 2);
    }
}

TEST_CASE("trace identity across bundled systems and balances", "[spectral][property]") {
    for (const char* nm : {"euler", "kowalewski", "riccati", "weierstrass"}) {
        SystemSpec spec = load_system(nm);
        auto s = qhode::detect_weights(spec).value();
        auto bals = qhode::solve_balances(spec, s);
        auto f = spec.rhs_polynomials();
        for (const auto& b : bals) {
            Matrix l = qhode::kowalevski_matrix(spec, s, b.c0);
            Scalar diag(0.0);
            auto pt = qhode::from_vector(b.c0);
            for (int j = 0; j < spec.n(); ++j)
                diag += f[static_cast<std::size_t>(j)].diff(j).eval(pt) +
                        Scalar(static_cast<double>(s[static_cast<std::size_t>(j)]));
            CHECK(std::abs(l.trace() - diag) < 1e-10);

            // The scaling eigenvalue -1 is always present.
            auto info = qhode::resonance_info(spec, s, b);
            CHECK(info.minus_one_present);
            CHECK(info.near_resonances.empty());
        }
    }
}

TEST_CASE("heavy-top line spectrum is pin-independent", "[spectral]") {
    SystemSpec spec = load_system("kowalewski");
    std::vector<int> s{1, 1, 1, 2, 2, 2};
    auto bals = qhode::solve_balances(spec, s);
    REQUIRE(bals[0].continuum);
    REQUIRE(bals[1].continuum);

    for (const Scalar alpha : {Scalar(2.0), Scalar(1.5), Scalar(0.8, 0.6)}) {
        for (int bidx = 0; bidx < 2; ++bidx) {
            Balance pinned = qhode::pin_family(bals[static_cast<std::size_t>(bidx)], alpha);
            auto info = qhode::resonance_info(spec, s, pinned);
            check_integer_spectrum(info.spectrum, {-1.0, 0.0, 1.0, 2.0, 3.0, 4.0}, 1e-7);
            CHECK(std::abs(info.l.trace() - Scalar(9.0)) < 1e-9);
            CHECK(info.resonances == std::vector<int>{1, 2, 3, 4});
            for (int k : info.resonances) CHECK(info.kernel_dim.at(k) == 1);
            CHECK(info.zero_kernel_dim == 1);
            CHECK(info.family_parameters == 5);  // 4 resonances + line parameter
            CHECK(qhode::principal_family_count(info, spec.n()));
        }
    }
}

TEST_CASE("heavy-top first resonance eigenvector", "[spectral]") {
    // At pin alpha the k = 1 eigenvector of the line family is proportional
    // to (i(alpha^2-2), -alpha^2, alpha, 0, 0, 1) for the family with leading
    // m3 ~ +i/z (conjugate-signed for the other family).
    SystemSpec spec = load_system("kowalewski");
    std::vector<int> s{1, 1, 1, 2, 2, 2};
    auto bals = qhode::solve_balances(spec, s);
    const Scalar alpha(2.0);
    for (int bidx = 0; bidx < 2; ++bidx) {
        Balance pinned = qhode::pin_family(bals[static_cast<std::size_t>(bidx)], alpha);
        auto info = qhode::resonance_info(spec, s, pinned);
        const Scalar sg = pinned.c0(2).imag() > 0 ? Scalar(1.0) : Scalar(-1.0);
        Vector v(6);
        v << sg * kI * (alpha * alpha - Scalar(2.0)), -alpha * alpha, alpha,
             Scalar(0.0), Scalar(0.0), Scalar(1.0);
        Vector resid = info.l * v - v;
        CHECK(resid.cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("isolated heavy-top balances are not principal", "[spectral]") {
    SystemSpec spec = load_system("kowalewski");
    std::vector<int> s{1, 1, 1, 2, 2, 2};
    auto bals = qhode::solve_balances(spec, s);
    for (int bidx = 2; bidx < 4; ++bidx) {
        auto info = qhode::resonance_info(spec, s, bals[static_cast<std::size_t>(bidx)]);
        check_integer_spectrum(info.spectrum, {-1.0, -1.0, 2.0, 2.0, 3.0, 4.0}, 1e-7);
        CHECK(info.family_parameters == 4);
        CHECK_FALSE(qhode::principal_family_count(info, spec.n()));
    }
}

TEST_CASE("small closed-form spectra", "[spectral]") {
    // Companion elliptic system: eigenvalues {-1, 6}.
    SystemSpec wei = load_system("weierstrass");
    auto wb = qhode::solve_balances(wei, {2, 3});
    auto winfo = qhode::resonance_info(wei, {2, 3}, wb[0]);
    check_integer_spectrum(winfo.spectrum, {-1.0, 6.0});
    CHECK(winfo.resonances == std::vector<int>{6});

    // Two-variable quadratic toy: {-1, 2} at both balances.
    SystemSpec toy = qhode::parse_system("vars: w1, w2\neq: w1' = w2^2\neq: w2' = w1*w2\n");
    auto tb = qhode::solve_balances(toy, {1, 1});
    REQUIRE(tb.size() == 2);
    for (const auto& b : tb) {
        auto info = qhode::resonance_info(toy, {1, 1}, b);
        check_integer_spectrum(info.spectrum, {-1.0, 2.0});
    }
}
