#include "wulff/closedform.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "wulff/bessel.hpp"

namespace wulff::closedform {

namespace {

double nu_of(int n) { return (n - 2) / 2.0; }  // n/2 - 1

void check_n(int n) {
    if (n < 2) throw std::invalid_argument("dimension must be >= 2");
}

// RHS of the alpha_eta relation, i.e. 1/alpha as a function of eta.
// Direct formula for moderate arguments; for sqrt(eta)*r2 small the two
// leading terms cancel catastrophically, so a small-argument expansion of
// the Bessel ratio is substituted there:
//   1/alpha = -kappa [ sum r^{n+2}/(n(n+2)) + 2 eta sum r^{n+4}/(n^2(n+2)(n+4)) ] + O(eta^2)
double inv_alpha(int n, double kappa, double r1, double r2, double eta) {
    const double nu = nu_of(n);
    const double rt = std::sqrt(eta);
    // below z = 0.01 the direct formula loses ~(V/eta)*eps to cancellation
    // while the two-term expansion is already at ~z^6 relative error; the
    // crossover keeps both sides under 1e-11
    if (rt * r2 < 0.01) {
        double s1 = 0, s2 = 0;
        for (double r : {r1, r2}) {
            s1 += std::pow(r, n + 2);
            s2 += std::pow(r, n + 4);
        }
        return -kappa * (s1 / (n * (n + 2.0)) + 2.0 * eta * s2 / (n * n * (n + 2.0) * (n + 4.0)));
    }
    const double vol = kappa * (std::pow(r1, n) + std::pow(r2, n));
    double sum = 0;
    for (double r : {r1, r2}) {
        if (r == 0) continue;
        const auto q = bessel::j_ratio(nu + 1.0, nu, rt * r);
        if (q.at_pole)
            throw PoleEncountered("alpha_for_eta: sqrt(eta)*R at a zero of J_{n/2-1}");
        sum += std::pow(r, n - 1) * q.value;
    }
    return vol / eta - n * kappa / (eta * rt) * sum;
}

// LHS of the coupling equation at the normalized pair (a <= b, a^n+b^n=1).
double coupling_lhs(int n, double a, double b, double t) {
    const double nu = nu_of(n);
    double s = 0;
    for (double r : {a, b}) {
        const auto q = bessel::j_ratio(nu + 2.0, nu, t * r);
        if (q.at_pole) throw PoleEncountered("coupling equation evaluated at a pole");
        s += std::pow(r, n) * q.value;
    }
    return s;
}

// First sign change of f on [lo, hi] by scan + bisection. f(lo) and the
// first crossing must have opposite signs; returns the refined root.
template <typename F>
double first_root(F&& f, double lo, double hi, int scan_points) {
    double xl = lo, fl = f(xl);
    double xr = 0, fr = 0;
    bool found = false;
    for (int k = 1; k <= scan_points; ++k) {
        xr = lo + (hi - lo) * k / scan_points;
        fr = f(xr);
        if ((fl < 0) != (fr < 0)) {
            found = true;
            break;
        }
        xl = xr;
        fl = fr;
    }
    if (!found) throw SolverFailure("root bracket scan failed");
    for (int it = 0; it < 90 && xr - xl > 1e-15 * (1.0 + std::fabs(xr)); ++it) {
        const double m = 0.5 * (xl + xr);
        const double fm = f(m);
        if ((fl < 0) == (fm < 0)) {
            xl = m;
            fl = fm;
        } else {
            xr = m;
        }
    }
    return 0.5 * (xl + xr);
}

}  // namespace

WulffPair::WulffPair(int n_, double r1_, double r2_, double kappa_)
    : n(n_), r1(r1_), r2(r2_), kappa(kappa_) {
    check_n(n);
    if (!(kappa > 0)) throw std::invalid_argument("WulffPair: kappa must be > 0");
    if (r1 < 0 || r2 < 0) throw std::invalid_argument("WulffPair: radii must be >= 0");
    if (r1 > r2) std::swap(r1, r2);
    if (!(r2 > 0)) throw std::invalid_argument("WulffPair: larger radius must be > 0");
}

double WulffPair::volume() const { return kappa * (std::pow(r1, n) + std::pow(r2, n)); }

std::string to_string(Regime r) {
    switch (r) {
        case Regime::local: return "local";
        case Regime::twisted_large_ball: return "twisted-large-ball";
        case Regime::twisted_theta: return "twisted-theta";
        case Regime::nonlocal: return "nonlocal";
        case Regime::saturated: return "saturated";
    }
    return "?";
}

double faber_krahn_level(int n, double kappa, double volume) {
    check_n(n);
    const double j = bessel::j_first_zero(nu_of(n));
    return std::pow(kappa, 2.0 / n) * j * j / std::pow(volume, 2.0 / n);
}

double saturation_level(int n, double kappa, double volume) {
    return std::pow(2.0, 2.0 / n) * faber_krahn_level(n, kappa, volume);
}

EigenResult local_wulff_eigenvalue(int n, double kappa, double R) {
    check_n(n);
    if (!(kappa > 0)) throw std::invalid_argument("local_wulff_eigenvalue: kappa must be > 0");
    if (!(R > 0)) throw std::invalid_argument("local_wulff_eigenvalue: R must be > 0");
    const double j = bessel::j_first_zero(nu_of(n));
    EigenResult res;
    res.lambda = (j / R) * (j / R);
    res.regime = Regime::local;
    res.c = 0.0;
    return res;
}

double theta_star(int n) {
    check_n(n);
    return std::pow(2.0, 1.0 / n) * bessel::j_first_zero(nu_of(n));
}

double theta_root(int n, double r1, double r2) {
    check_n(n);
    if (!(r1 > 0))
        throw std::invalid_argument("theta_root: r1 must be > 0 (use the single-set value)");
    if (r1 > r2) std::swap(r1, r2);
    const double sigma = std::pow(std::pow(r1, n) + std::pow(r2, n), 1.0 / n);
    const double a = r1 / sigma, b = r2 / sigma;

    if (r1 / r2 > 1.0 - 1e-6) return theta_star(n) / sigma;

    const double nu = nu_of(n);
    const double j1 = bessel::j_first_zero(nu);
    const double j2 = bessel::j_zero(nu, 2);
    // the sum of ratio terms is positive before the first pole j1/b; the
    // first root lies strictly between that pole and the next singularity
    const double lo = (j1 / b) * (1.0 + 1e-9);
    const double hi = std::min(j1 / a, j2 / b) * (1.0 - 1e-9);
    auto f = [&](double t) { return coupling_lhs(n, a, b, t); };
    const double theta_hat = first_root(f, lo, hi, 256);
    return theta_hat / sigma;
}

double threshold_ratio(int n) {
    check_n(n);
    static std::mutex mtx;
    static std::map<int, double> cache;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const double jmid = bessel::j_first_zero(n / 2.0);
    // theta_hat * b decreases from j_{n/2+1,1} (ratio -> 0) to j_{n/2-1,1}
    // (ratio -> 1); c_n is where it crosses j_{n/2,1}
    auto g = [&](double ratio) {
        const double b = std::pow(1.0 + std::pow(ratio, n), -1.0 / n);
        const double a = ratio * b;
        return theta_root(n, a, b) * b - jmid;
    };
    double lo = 0.05, hi = 0.999;
    double flo = g(lo);
    if (!(flo > 0)) throw SolverFailure("threshold_ratio: unexpected sign at ratio=0.05");
    for (int it = 0; it < 64 && hi - lo > 1e-13; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = g(m);
        if ((flo < 0) == (fm < 0)) {
            lo = m;
            flo = fm;
        } else {
            hi = m;
        }
    }
    const double cn = 0.5 * (lo + hi);
    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(n, cn);
    return cn;
}

TwistedCoefficients twisted_coefficients(int n, double r1, double r2, double lambda) {
    const double nu = nu_of(n);
    const double rt = std::sqrt(lambda);
    TwistedCoefficients tc{};
    tc.c1 = std::pow(r2, n / 2.0 + 1.0) * bessel::j(nu + 2.0, rt * r2);
    tc.c2 = std::pow(r1, n / 2.0 + 1.0) * bessel::j(nu + 2.0, rt * r1);
    tc.c_from_u1 = -tc.c1 * lambda * std::pow(r1, 1.0 - n / 2.0) * bessel::j(nu, rt * r1);
    tc.c_from_u2 = tc.c2 * lambda * std::pow(r2, 1.0 - n / 2.0) * bessel::j(nu, rt * r2);
    return tc;
}

EigenResult twisted_pair_eigenvalue(int n, double r1, double r2) {
    check_n(n);
    if (r1 > r2) std::swap(r1, r2);
    if (!(r2 > 0)) throw std::invalid_argument("twisted_pair_eigenvalue: larger radius must be > 0");
    if (r1 < 0) throw std::invalid_argument("twisted_pair_eigenvalue: radii must be >= 0");

    EigenResult res;
    res.zero_average = true;
    if (r1 == 0.0) {
        const double jmid = bessel::j_first_zero(n / 2.0);
        res.lambda = (jmid / r2) * (jmid / r2);
        res.regime = Regime::twisted_large_ball;
        return res;
    }
    const double ratio = r1 / r2;
    if (ratio < threshold_ratio(n)) {
        const double jmid = bessel::j_first_zero(n / 2.0);
        res.lambda = (jmid / r2) * (jmid / r2);
        res.regime = Regime::twisted_large_ball;
        return res;
    }
    const double th = theta_root(n, r1, r2);
    res.lambda = th * th;
    res.regime = Regime::twisted_theta;
    const auto tc = twisted_coefficients(n, r1, r2, res.lambda);
    res.c1 = tc.c1;
    res.c2 = tc.c2;
    res.c = tc.c_from_u1;
    return res;
}

double alpha_for_eta(const WulffPair& pair, double eta, EtaMode mode) {
    if (!(eta > 0)) throw EtaOutOfRange("alpha_for_eta: eta must be > 0");
    const double vol = pair.volume();
    if (mode == EtaMode::certified) {
        const double lo = faber_krahn_level(pair.n, pair.kappa, vol);
        const double hi = saturation_level(pair.n, pair.kappa, vol);
        if (!(eta > lo && eta < hi))
            throw EtaOutOfRange("alpha_for_eta: eta outside the certified interval");
    }
    const double inv = inv_alpha(pair.n, pair.kappa, pair.r1, pair.r2, eta);
    return 1.0 / inv;
}

EigenResult nonlocal_pair_eigenvalue(const WulffPair& pair, double alpha) {
    const int n = pair.n;
    const double nu = nu_of(n);

    if (pair.r1 / pair.r2 > 1.0 - 1e-12 && alpha >= 0) {
        // equal radii: the antisymmetric zero-average mode pins the first
        // eigenvalue at the saturated level for every alpha >= 0
        EigenResult res;
        res.lambda = saturation_level(n, pair.kappa, pair.volume());
        res.regime = Regime::saturated;
        res.c1 = 1.0;
        res.c2 = 1.0;
        res.c = 0.0;
        res.zero_average = true;
        return res;
    }
    if (alpha == 0.0) return local_wulff_eigenvalue(n, pair.kappa, pair.r2);

    // normalize to r1^n + r2^n = 1 (the scaling law maps the result back)
    const double sigma = std::pow(std::pow(pair.r1, n) + std::pow(pair.r2, n), 1.0 / n);
    const double a = pair.r1 / sigma, b = pair.r2 / sigma;
    const double alpha_hat = rescaled_weight(n, sigma, alpha);

    const double j1 = bessel::j_first_zero(nu);
    const double local = (j1 / b) * (j1 / b);

    auto g = [&](double eta) { return inv_alpha(n, pair.kappa, a, b, eta) - 1.0 / alpha_hat; };

    double eta_hat = 0;
    if (alpha_hat > 0) {
        // radial branch asymptote: theta_root^2, or (j_{n/2+1,1}/b)^2 when a = 0
        const double theta_cap =
            a > 0 ? theta_root(n, a, b) : bessel::j_first_zero(nu + 2.0) / b;
        const double cap2 = theta_cap * theta_cap;
        const double lo = local * (1.0 + 1e-11);
        const double hi = cap2 * (1.0 - 1e-13);
        if (1.0 / alpha_hat >= inv_alpha(n, pair.kappa, a, b, lo)) {
            eta_hat = local;  // shift below bracket resolution
        } else if (g(hi) >= 0) {
            eta_hat = hi;  // alpha past bracket resolution: at the asymptote
        } else {
            eta_hat = first_root(g, lo, hi, 48);
        }
    } else {
        const double hi = local * (1.0 - 1e-11);
        const double lo = local * 1e-9;
        if (g(lo) <= 0)
            throw SolverFailure(
                "nonlocal_pair_eigenvalue: alpha below the supported negative range");
        if (g(hi) >= 0) {
            eta_hat = local;
        } else {
            eta_hat = first_root(g, lo, hi, 48);
        }
    }

    EigenResult res;
    res.lambda = eta_hat / (sigma * sigma);
    res.regime = Regime::nonlocal;
    // component amplitudes of the (u, v) eigenfunction pair, original scale:
    // u on W_{r1} carries r2^{1-n/2} J_nu(k r2), v on W_{r2} the mirror
    const double rt = std::sqrt(eta_hat) / sigma;
    auto radial_head = [&](double r) {
        return r == 0.0 ? std::pow(rt / 2.0, nu) / std::tgamma(n / 2.0)
                        : std::pow(r, 1.0 - n / 2.0) * bessel::j(nu, rt * r);
    };
    const double amp_u = radial_head(pair.r2);
    const double amp_v = radial_head(pair.r1);
    res.c1 = amp_u;
    res.c2 = amp_v;
    // the constant term alpha * integral(u + v), via
    // int_{W_r} (rho^{1-n/2} J_nu(k rho) - r^{1-n/2} J_nu(k r)) dx
    //   = kappa r^{n/2+1} J_{nu+2}(k r)
    const double total =
        amp_u * pair.kappa * std::pow(pair.r1, n / 2.0 + 1.0) * bessel::j(nu + 2.0, rt * pair.r1) +
        amp_v * pair.kappa * std::pow(pair.r2, n / 2.0 + 1.0) * bessel::j(nu + 2.0, rt * pair.r2);
    res.c = alpha * total;
    res.zero_average = false;
    return res;
}

double critical_alpha(int n, double kappa) {
    check_n(n);
    if (!(kappa > 0)) throw std::invalid_argument("critical_alpha: kappa must be > 0");
    const double nu = nu_of(n);
    const double j = bessel::j_first_zero(nu);
    const double arg = std::pow(2.0, 1.0 / n) * j;
    const double jnum = bessel::j(nu, arg);
    const double den = arg * jnum - n * bessel::j(nu + 1.0, arg);
    if (std::fabs(den) < 1e-14)
        throw SolverFailure("critical_alpha: denominator vanishes");
    return std::pow(2.0, 3.0 / n) * std::pow(kappa, 2.0 / n) * j * j * j * jnum / den;
}

double critical_alpha_limit_oracle(int n, double kappa, double r2_start) {
    check_n(n);
    const double eta = saturation_level(n, kappa, 1.0);
    auto alpha_at = [&](double t) {  // t = r2^n, unit total volume
        const double r2 = std::pow(t, 1.0 / n);
        const double r1 = std::pow(1.0 / kappa - t, 1.0 / n);
        return alpha_for_eta(WulffPair(n, r1, r2, kappa), eta, EtaMode::extended);
    };
    // alpha(t) = alpha_c + C t + o(t): two-point Richardson in t kills C
    const double t0 = std::pow(r2_start, n);
    return 2.0 * alpha_at(t0 / 2.0) - alpha_at(t0);
}

RadialProfile radial_eigenfunction_profile(int n, double R, double lambda, double amplitude,
                                           int grid_points) {
    check_n(n);
    if (grid_points < 2)
        throw std::invalid_argument("radial_eigenfunction_profile: need >= 2 grid points");
    if (!(R > 0) || !(lambda > 0))
        throw std::invalid_argument("radial_eigenfunction_profile: R and lambda must be > 0");
    const double nu = nu_of(n);
    const double rt = std::sqrt(lambda);
    const double boundary = std::pow(R, 1.0 - n / 2.0) * bessel::j(nu, rt * R);
    const double origin_limit = std::pow(rt / 2.0, nu) / std::tgamma(n / 2.0);

    RadialProfile prof;
    prof.R = R;
    prof.rho.resize(grid_points);
    prof.values.resize(grid_points);
    for (int i = 0; i < grid_points; ++i) {
        const double rho = R * i / (grid_points - 1.0);
        prof.rho[i] = rho;
        const double f =
            rho == 0.0 ? origin_limit : std::pow(rho, 1.0 - n / 2.0) * bessel::j(nu, rt * rho);
        prof.values[i] = amplitude * (f - boundary);
    }
    prof.values[grid_points - 1] = 0.0;  // exact by construction
    return prof;
}

double rescale(int n, double t, double alpha, double lambda_of_rescaled_weight) {
    check_n(n);
    (void)alpha;
    if (!(t > 0)) throw std::invalid_argument("rescale: t must be > 0");
    return lambda_of_rescaled_weight / (t * t);
}

double rescaled_weight(int n, double t, double alpha) {
    check_n(n);
    if (!(t > 0)) throw std::invalid_argument("rescaled_weight: t must be > 0");
    return std::pow(t, n + 2) * alpha;
}

}  // namespace wulff::closedform
