#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wulff/saturation.hpp"

using namespace wulff;
using namespace wulff::saturation;
constexpr double pi = std::numbers::pi;

TEST_CASE("theorem bound branches") {
    const double V = pi;
    // alpha = 0: Faber-Krahn value
    CHECK(theorem_bound(2, pi, V, 0.0) ==
          doctest::Approx(closedform::faber_krahn_level(2, pi, V)).epsilon(1e-12));

    // continuity at the junction
    const double ac_scaled = closedform::critical_alpha(2, pi) / std::pow(V, 2.0);
    const double below = theorem_bound(2, pi, V, ac_scaled * (1 - 1e-9));
    const double above = theorem_bound(2, pi, V, ac_scaled * (1 + 1e-9));
    CHECK(std::fabs(below - above) < 1e-6 * above);
    CHECK(std::fabs(below - closedform::saturation_level(2, pi, V)) < 1e-6 * below);

    // past the junction the bound is the constant saturated level
    CHECK(theorem_bound(2, pi, V, 2 * ac_scaled) ==
          doctest::Approx(closedform::saturation_level(2, pi, V)).epsilon(1e-13));
    CHECK(theorem_bound(2, pi, V, 5 * ac_scaled) ==
          doctest::Approx(theorem_bound(2, pi, V, 2 * ac_scaled)).epsilon(1e-13));
}

TEST_CASE("min over pairs: subcritical single set, supercritical equal pair") {
    const double V = pi;
    const double ac_scaled = closedform::critical_alpha(2, pi) / std::pow(V, 2.0);

    auto sub = min_over_pairs(2, pi, V, 0.5 * ac_scaled);
    CHECK(sub.first.s == 0.0);
    CHECK(sub.second == doctest::Approx(theorem_bound(2, pi, V, 0.5 * ac_scaled)).epsilon(1e-9));

    auto sup = min_over_pairs(2, pi, V, 2.0 * ac_scaled);
    CHECK(sup.first.s == 0.5);
    CHECK(sup.second == doctest::Approx(closedform::saturation_level(2, pi, V)).epsilon(1e-10));

    // negative weight: single set wins and the value drops below local
    auto neg = min_over_pairs(2, pi, V, -0.5);
    CHECK(neg.first.s == 0.0);
    CHECK(neg.second < closedform::faber_krahn_level(2, pi, V));
    CHECK(neg.second ==
          doctest::Approx(
              closedform::nonlocal_pair_eigenvalue(pair_from_split(2, pi, V, 0.0), -0.5).lambda)
              .epsilon(1e-10));
}

TEST_CASE("local optimality certificate at the reported split") {
    const double V = pi;
    const double ac_scaled = closedform::critical_alpha(2, pi) / std::pow(V, 2.0);
    for (double alpha : {0.3 * ac_scaled, 0.9 * ac_scaled, 1.5 * ac_scaled}) {
        const auto [split, lam] = min_over_pairs(2, pi, V, alpha);
        const double step = 0.5 / 64;
        for (double s : {split.s - step, split.s + step}) {
            if (s < 0 || s > 0.5) continue;
            const double rival =
                closedform::nonlocal_pair_eigenvalue(pair_from_split(2, pi, V, s), alpha).lambda;
            CHECK(lam <= rival + 1e-9 * std::max(1.0, rival));
        }
    }
}

TEST_CASE("curve: plateau, transition bracketing, agreement with the bound") {
    const int n = 2;
    const double V = pi;
    const double ac_scaled = closedform::critical_alpha(n, pi) / std::pow(V, 2.0);
    std::vector<double> alphas;
    for (int k = 0; k < 60; ++k) alphas.push_back(4.0 * ac_scaled * k / 59.0);
    const auto curve = saturation_curve(n, pi, V, alphas);
    REQUIRE(curve.samples.size() == alphas.size());
    CHECK(curve.critical_alpha_scaled == doctest::Approx(ac_scaled).epsilon(1e-12));

    double prev = -1e300;
    size_t first_half = curve.samples.size();
    const double sat = closedform::saturation_level(n, pi, V);
    for (size_t k = 0; k < curve.samples.size(); ++k) {
        const auto& s = curve.samples[k];
        REQUIRE(s.ok);
        CHECK(s.lambda_min >= prev - 1e-9 * std::max(1.0, std::fabs(prev)));
        prev = s.lambda_min;
        CHECK(s.lambda_min ==
              doctest::Approx(theorem_bound(n, pi, V, s.alpha)).epsilon(1e-8));
        if (s.s_opt == 0.5 && first_half == curve.samples.size()) first_half = k;
    }
    REQUIRE(first_half < curve.samples.size());
    REQUIRE(first_half > 0);
    // the optimizer flips within one grid step of the critical weight
    CHECK(curve.samples[first_half - 1].alpha <= ac_scaled + 1e-12);
    CHECK(curve.samples[first_half].alpha >= ac_scaled - 1e-12);
    // plateau holds to 1e-8 beyond the junction
    for (size_t k = first_half; k < curve.samples.size(); ++k)
        CHECK(std::fabs(curve.samples[k].lambda_min - sat) <= 1e-8 * sat);
}

TEST_CASE("transition location is volume-invariant in alpha V^{1+2/n}") {
    const int n = 2;
    const double ac = closedform::critical_alpha(n, pi);
    for (double V : {pi / 2, pi, 2 * pi}) {
        const double scale = std::pow(V, 1.0 + 2.0 / n);
        // bisect the flip of the optimal split in the scaled variable
        double lo = 0.2 * ac, hi = 3.0 * ac;
        for (int it = 0; it < 48; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto [split, lam] = min_over_pairs(n, pi, V, mid / scale);
            (void)lam;
            if (split.s == 0.5)
                hi = mid;
            else
                lo = mid;
        }
        CHECK(0.5 * (lo + hi) == doctest::Approx(ac).epsilon(1e-6));
    }
}

TEST_CASE("unsorted alpha list is rejected") {
    CHECK_THROWS(saturation_curve(2, pi, pi, {1.0, 0.5}));
}
