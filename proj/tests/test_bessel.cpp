#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wulff/bessel.hpp"

using namespace wulff;

TEST_CASE("series leading terms at the origin") {
    CHECK(bessel::j(0.0, 0.0) == 1.0);
    CHECK(bessel::j(1.0, 0.0) == 0.0);
    CHECK(bessel::j(2.5, 0.0) == 0.0);
}

TEST_CASE("rejects invalid order and argument") {
    CHECK_THROWS(bessel::j(-0.5, 1.0));
    CHECK_THROWS(bessel::j(1.0, -1.0));
    CHECK_THROWS(bessel::j_zero(1.0, 0));
}

TEST_CASE("half order matches the closed trigonometric form") {
    // J_{1/2}(x) = sqrt(2/(pi x)) sin x
    double worst = 0;
    for (int k = 1; k <= 100; ++k) {
        const double x = 0.2 * k;
        const double closed = std::sqrt(2.0 / (std::numbers::pi * x)) * std::sin(x);
        const double rel = std::fabs(bessel::j(0.5, x) - closed) / std::fabs(closed);
        worst = std::max(worst, rel);
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("spot values against 30-digit references") {
    CHECK(bessel::j(0, 1) == doctest::Approx(oracle::J0_at_1).epsilon(1e-14));
    CHECK(bessel::j(0, 10) == doctest::Approx(oracle::J0_at_10).epsilon(1e-13));
    CHECK(bessel::j(1, 5) == doctest::Approx(oracle::J1_at_5).epsilon(1e-13));
    CHECK(bessel::j(2.5, 7.25) == doctest::Approx(oracle::J2p5_at_7p25).epsilon(1e-13));
    CHECK(bessel::j(0, 30) == doctest::Approx(oracle::J0_at_30).epsilon(1e-12));
    CHECK(bessel::j(3, 40) == doctest::Approx(oracle::J3_at_40).epsilon(1e-12));
    CHECK(bessel::j(1.5, 22.5) == doctest::Approx(oracle::J1p5_at_22p5).epsilon(1e-12));
    CHECK(bessel::j(0.25, 14.0) == doctest::Approx(oracle::J0p25_at_14).epsilon(1e-12));
    CHECK(bessel::j(5, 50) == doctest::Approx(oracle::J5_at_50).epsilon(1e-12));
}

TEST_CASE("first zeros against the bisection-on-series oracle") {
    CHECK(std::fabs(bessel::j_first_zero(0.5) - std::numbers::pi) < 1e-11);
    CHECK(std::fabs(bessel::j_first_zero(0.0) - oracle::naive_first_zero(0.0)) < 1e-10);
    CHECK(std::fabs(bessel::j_first_zero(1.0) - oracle::naive_first_zero(1.0)) < 1e-10);
    CHECK(std::fabs(bessel::j_first_zero(0.0) - oracle::j01) < 1e-12);
    CHECK(std::fabs(bessel::j_first_zero(1.0) - oracle::j11) < 1e-12);
    CHECK(std::fabs(bessel::j_first_zero(2.0) - oracle::j21) < 1e-12);
    CHECK(std::fabs(bessel::j_zero(0.0, 2) - oracle::j02) < 1e-12);
}

TEST_CASE("zero cache returns identical values") {
    const double a = bessel::j_zero(1.25, 3);
    const double b = bessel::j_zero(1.25, 3);
    CHECK(a == b);
}

TEST_CASE("ratio near zero argument and at a pole") {
    // J_{nu+1}/J_nu ~ x/(2(nu+1)) -> 0
    const auto r = bessel::j_ratio(2.0, 1.0, 1e-6);
    CHECK(!r.at_pole);
    CHECK(std::fabs(r.value) < 1e-5);

    const auto p = bessel::j_ratio(2.0, 0.0, bessel::j_first_zero(0.0));
    CHECK(p.at_pole);
}

TEST_CASE("three-term recurrence over random orders and arguments") {
    auto gen = oracle::rng(20240811);
    std::uniform_real_distribution<double> unu(0.0, 5.0), ux(1e-3, 30.0);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        const double nu = unu(gen) + 1.0;  // recurrence at order nu needs nu-1 >= 0
        const double x = ux(gen);
        const double lhs = bessel::j(nu - 1, x) + bessel::j(nu + 1, x);
        const double rhs = 2.0 * nu / x * bessel::j(nu, x);
        const double res = std::fabs(lhs - rhs) / std::max(1.0, std::fabs(bessel::j(nu, x)));
        worst = std::max(worst, res);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("integral identity int_0^R J_{n/2-1}(k r) r^{n/2} dr = R^{n/2} J_{n/2}(k R)/k") {
    auto gen = oracle::rng(7);
    std::uniform_real_distribution<double> uk(0.5, 4.0), ur(0.5, 3.0);
    for (int n : {2, 3, 4}) {
        const double nu = n / 2.0 - 1.0;
        for (int rep = 0; rep < 5; ++rep) {
            const double k = uk(gen), R = ur(gen);
            const double quad = oracle::integrate(
                [&](double r) { return bessel::j(nu, k * r) * std::pow(r, n / 2.0); }, 0.0, R,
                1e-12);
            const double closed = std::pow(R, n / 2.0) * bessel::j(nu + 1.0, k * R) / k;
            CHECK(std::fabs(quad - closed) < 1e-8 * std::max(1.0, std::fabs(closed)));
        }
    }
}

TEST_CASE("interlacing of first zeros across half-order steps") {
    for (int n = 2; n <= 8; ++n) {
        const double a = bessel::j_first_zero(n / 2.0 - 1.0);
        const double b = bessel::j_first_zero(n / 2.0);
        const double c = bessel::j_first_zero(n / 2.0 + 1.0);
        CHECK(a < b);
        CHECK(b < c);
    }
}

TEST_CASE("j_{n/2,1} > 2^{1/n} j_{n/2-1,1}") {
    for (int n = 2; n <= 8; ++n) {
        CHECK(bessel::j_first_zero(n / 2.0) >
              std::pow(2.0, 1.0 / n) * bessel::j_first_zero(n / 2.0 - 1.0));
    }
}
