#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "wulff/bessel.hpp"
#include "wulff/closedform.hpp"
#include "wulff/gauge.hpp"
#include "wulff/grid2d.hpp"
#include "wulff/radial.hpp"
#include "wulff/rearrange.hpp"

namespace wulffcli {

namespace {

using namespace wulff;
constexpr double pi = std::numbers::pi;

struct Check {
    bool pass = true;
    double worst = 0;
    std::string note;

    void fold(double residual, double limit, const std::string& what) {
        worst = std::max(worst, residual);
        if (residual > limit && pass) {
            pass = false;
            note = what;
        }
    }
};

SuiteResult finish(const std::string& name, const Check& c) {
    std::ostringstream os;
    os.precision(3);
    if (c.pass)
        os << "worst residual " << c.worst;
    else
        os << "failed: " << c.note << " (residual " << c.worst << ")";
    return {name, c.pass, os.str()};
}

SuiteResult suite_gauge(std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(-3.0, 3.0), ut(-2.0, 2.0);
    for (const Gauge& g :
         {Gauge::euclidean(2), Gauge::p_norm(2, 4.0), Gauge::p_norm(2, 1.5),
          Gauge::ellipse(4, 1, 2)}) {
        for (int k = 0; k < 1000; ++k) {
            double x[2] = {u(gen), u(gen)};
            if (std::hypot(x[0], x[1]) < 1e-2) continue;
            for (double r : g.identity_residuals(std::span<const double>(x, 2)))
                c.fold(r, 1e-9, "gauge/polar identity");
            const double t = ut(gen);
            const double h = g.value(std::span<const double>(x, 2));
            double tx[2] = {t * x[0], t * x[1]};
            c.fold(std::fabs(g.value(std::span<const double>(tx, 2)) - std::fabs(t) * h),
                   1e-12 * std::max(1.0, h), "homogeneity");
        }
        c.fold(std::fabs(measure_by_quadrature(g) - pi) / pi, 1e-6, "normalization");
    }
    return finish("gauge", c);
}

SuiteResult suite_bessel(std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed + 1);
    std::uniform_real_distribution<double> unu(1.0, 6.0), ux(1e-3, 30.0);
    for (int k = 0; k < 1000; ++k) {
        const double nu = unu(gen), x = ux(gen);
        const double lhs = bessel::j(nu - 1, x) + bessel::j(nu + 1, x);
        const double rhs = 2 * nu / x * bessel::j(nu, x);
        c.fold(std::fabs(lhs - rhs) / std::max(1.0, std::fabs(bessel::j(nu, x))), 1e-10,
               "three-term recurrence");
    }
    std::uniform_real_distribution<double> uk(0.5, 4.0), ur(0.5, 3.0);
    for (int n : {2, 3, 4}) {
        const double nu = n / 2.0 - 1.0;
        const double kk = uk(gen), R = ur(gen);
        const int M = 4000;  // composite Simpson, ample for 1e-8
        double s = 0;
        const double h = R / M;
        for (int i = 0; i <= M; ++i) {
            const double r = i * h;
            const double f = bessel::j(nu, kk * r) * std::pow(r, n / 2.0);
            s += f * (i == 0 || i == M ? 1.0 : (i % 2 ? 4.0 : 2.0));
        }
        s *= h / 3.0;
        const double closed = std::pow(R, n / 2.0) * bessel::j(nu + 1, kk * R) / kk;
        c.fold(std::fabs(s - closed) / std::max(1.0, std::fabs(closed)), 1e-8,
               "integral identity");
    }
    for (int n = 2; n <= 8; ++n) {
        const double a = bessel::j_first_zero(n / 2.0 - 1.0);
        const double b = bessel::j_first_zero(n / 2.0);
        const double d = bessel::j_first_zero(n / 2.0 + 1.0);
        if (!(a < b && b < d)) c.fold(1.0, 0.5, "zero interlacing");
        if (!(b > std::pow(2.0, 1.0 / n) * a)) c.fold(1.0, 0.5, "j_{n/2,1} > 2^{1/n} j_{n/2-1,1}");
    }
    return finish("bessel", c);
}

SuiteResult suite_theta() {
    Check c;
    for (int n : {2, 3}) {
        const double ts = closedform::theta_star(n);
        for (int k = 1; k <= 20; ++k) {
            const double ratio = k / 21.0;
            const double r2 = std::pow(1.0 + std::pow(ratio, n), -1.0 / n);
            const double th = closedform::theta_root(n, ratio * r2, r2);
            c.fold(std::max(0.0, ts - th), 1e-9, "theta >= theta*");
        }
        const double r2a = std::pow(1.0 + std::pow(0.5, n), -1.0 / n);
        const double r2b = std::pow(1.0 + std::pow(0.999, n), -1.0 / n);
        const double gap_mid = closedform::theta_root(n, 0.5 * r2a, r2a) - ts;
        const double gap_near = closedform::theta_root(n, 0.999 * r2b, r2b) - ts;
        if (!(gap_near < gap_mid)) c.fold(1.0, 0.5, "gap shrinks toward equal radii");
    }
    return finish("theta", c);
}

SuiteResult suite_roundtrip(double kappa_skew, std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed + 2);
    std::uniform_real_distribution<double> ur(0.05, 1.0), uf(0.05, 0.95);
    const double kappa = pi;
    int done = 0;
    while (done < 100) {
        const double r2 = ur(gen), r1 = ur(gen) * r2;
        const closedform::WulffPair sut(2, r1, r2, kappa * kappa_skew);
        const closedform::WulffPair ref(2, r1, r2, kappa);
        const double lo = closedform::faber_krahn_level(2, kappa, ref.volume());
        const double hi = closedform::saturation_level(2, kappa, ref.volume());
        const double eta = lo + uf(gen) * (hi - lo);
        const double local = closedform::local_wulff_eigenvalue(2, kappa, r2).lambda;
        if (std::fabs(eta - local) < 1e-4 * local) continue;
        double alpha;
        try {
            alpha = closedform::alpha_for_eta(sut, eta, closedform::EtaMode::extended);
        } catch (const std::exception&) {
            continue;
        }
        try {
            const double back = closedform::nonlocal_pair_eigenvalue(ref, alpha).lambda;
            c.fold(std::fabs(back - eta) / eta, 1e-9, "alpha<->eta round trip");
        } catch (const std::exception&) {
            c.fold(1.0, 0.5, "inversion failed in the round trip");
        }
        ++done;
    }
    return finish("roundtrip", c);
}

SuiteResult suite_scaling(double kappa_skew, std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed + 3);
    std::uniform_real_distribution<double> ur(0.2, 1.0), ua(0.1, 20.0), ut(0.5, 2.0);
    const double kappa = pi;
    for (int k = 0; k < 50; ++k) {
        const double r2 = ur(gen), r1 = ur(gen) * r2, alpha = ua(gen), t = ut(gen);
        const closedform::WulffPair scaled(2, t * r1, t * r2, kappa * kappa_skew);
        const closedform::WulffPair base(2, r1, r2, kappa);
        const double lhs = closedform::nonlocal_pair_eigenvalue(scaled, alpha).lambda;
        const double rhs = closedform::rescale(
            2, t, alpha,
            closedform::nonlocal_pair_eigenvalue(base, closedform::rescaled_weight(2, t, alpha))
                .lambda);
        c.fold(std::fabs(lhs - rhs) / std::fabs(rhs), 1e-9, "scaling law");
    }
    return finish("scaling", c);
}

SuiteResult suite_monotonic(std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed + 4);
    std::uniform_real_distribution<double> ur(0.1, 1.2), ua(0.0, 30.0), ue(0.01, 2.0);
    for (int k = 0; k < 100; ++k) {
        const double r2 = ur(gen), r1 = ur(gen) * r2, alpha = ua(gen), eps = ue(gen);
        const closedform::WulffPair p(2, r1, r2, pi);
        const double l0 = closedform::nonlocal_pair_eigenvalue(p, alpha).lambda;
        const double l1 = closedform::nonlocal_pair_eigenvalue(p, alpha + eps).lambda;
        c.fold(std::max(0.0, l0 - l1), 1e-10, "monotone in alpha");
        c.fold(std::max(0.0, l1 - l0 - p.volume() * eps), 1e-10, "V-Lipschitz in alpha");
    }
    const double r = std::pow(0.5, 0.5);
    const double sat = closedform::saturation_level(2, pi, pi);
    for (double alpha : {0.0, 1.0, 50.0}) {
        const double lam =
            closedform::nonlocal_pair_eigenvalue(closedform::WulffPair(2, r, r, pi), alpha).lambda;
        c.fold(std::fabs(lam - sat), 1e-10 * sat, "equal-radii saturation");
    }
    return finish("monotonic", c);
}

SuiteResult suite_oracle() {
    Check c;
    const int N = 4000;
    for (double ratio : {0.2, 0.7}) {
        for (double r2 : {0.6, 1.0}) {
            for (double alpha : {0.0, 8.0, -0.5}) {
                const double r1 = ratio * r2;
                const double fd =
                    variational::radial_pair_nonlocal_solve(2, pi, r1, r2, alpha, N).lambda;
                const double cf =
                    closedform::nonlocal_pair_eigenvalue(closedform::WulffPair(2, r1, r2, pi),
                                                         alpha)
                        .lambda;
                c.fold(std::fabs(fd - cf) / std::fabs(cf), 1e-4, "closed form vs radial FD");
            }
        }
    }
    return finish("oracle", c);
}

SuiteResult suite_polya(std::uint64_t seed) {
    Check c;
    std::mt19937_64 gen(seed + 5);
    const double h = 1.0 / 32;
    const auto grid = variational::make_disk_grid(pi, h);
    const auto gauge = Gauge::euclidean(2);
    std::uniform_real_distribution<double> uc(-0.6, 0.6), uw(0.08, 0.35), ua(0.4, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        variational::GridFunction u(std::make_shared<variational::CartesianGrid2D>(grid));
        double cx[3], cy[3], w[3], a[3];
        for (int b = 0; b < 3; ++b) {
            cx[b] = uc(gen);
            cy[b] = uc(gen);
            w[b] = uw(gen);
            a[b] = ua(gen);
        }
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i)
                if (grid.inside(i, j)) {
                    double s = 0;
                    for (int b = 0; b < 3; ++b) {
                        const double dx = grid.x(i) - cx[b], dy = grid.y(j) - cy[b];
                        s += a[b] * std::exp(-(dx * dx + dy * dy) / (2 * w[b] * w[b]));
                    }
                    u.at(i, j) = s;
                }
        const auto [lhs, rhs] = variational::polya_szego_gap(u, gauge);
        c.fold(std::max(0.0, rhs - lhs), 6.0 * h * std::max(1.0, lhs), "energy comparison");
    }
    return finish("polya", c);
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const std::vector<std::string>& only,
                                           double kappa_skew, std::uint64_t seed) {
    const std::vector<std::string> all = {"gauge",   "bessel",    "theta",  "roundtrip",
                                          "scaling", "monotonic", "oracle", "polya"};
    auto wanted = [&](const std::string& s) {
        return only.empty() || std::find(only.begin(), only.end(), s) != only.end();
    };
    std::vector<SuiteResult> out;
    if (wanted("gauge")) out.push_back(suite_gauge(seed));
    if (wanted("bessel")) out.push_back(suite_bessel(seed));
    if (wanted("theta")) out.push_back(suite_theta());
    if (wanted("roundtrip")) out.push_back(suite_roundtrip(kappa_skew, seed));
    if (wanted("scaling")) out.push_back(suite_scaling(kappa_skew, seed));
    if (wanted("monotonic")) out.push_back(suite_monotonic(seed));
    if (wanted("oracle")) out.push_back(suite_oracle());
    if (wanted("polya")) out.push_back(suite_polya(seed));
    for (const auto& name : only)
        if (std::find(all.begin(), all.end(), name) == all.end())
            out.push_back({name, false, "unknown suite"});
    return out;
}

}  // namespace wulffcli
