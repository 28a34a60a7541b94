#include "wulff/bessel.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wulff::bessel {

namespace {

constexpr double kSeriesCrossover = 10.0;

// Ascending power series, long double throughout. Adequate for x <= ~12;
// above that the alternating terms start eating digits.
long double series_j(long double nu, long double x) {
    const long double half = x / 2.0L;
    long double lead = std::pow(half, nu) / std::tgamma(nu + 1.0L);
    if (!std::isfinite(lead)) return 0.0L;  // deep underflow for large nu
    const long double q = half * half;
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 60; ++k) {
        term *= -q / ((k + 1.0L) * (nu + k + 1.0L));
        sum += term;
        if (std::fabs(term) < 1e-18L * std::fabs(sum)) break;
    }
    return lead * sum;
}

// Miller backward recurrence over orders nu+k, normalized by the Neumann
// series  sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(x) = (x/2)^nu.
long double miller_j(long double nu, long double x) {
    const int top = static_cast<int>(std::ceil(std::fmax(x, nu))) + 44;
    std::vector<long double> p(static_cast<size_t>(top) + 2, 0.0L);
    p[top + 1] = 0.0L;
    p[top] = 1e-30L;
    for (int k = top; k >= 1; --k) {
        p[k - 1] = (2.0L * (nu + k) / x) * p[k] - p[k + 1];
        if (std::fabs(p[k - 1]) > 1e280L) {
            for (int m = k - 1; m <= top + 1; ++m) p[m] *= 1e-280L;
        }
    }
    // normalization: c_0 = Gamma(nu+1), c_k = (nu+2k) Gamma(nu+k)/k!
    long double sum = std::tgamma(nu + 1.0L) * p[0];
    long double g = std::tgamma(nu + 1.0L);  // g_k = Gamma(nu+k)/k!, from k=1
    for (int k = 1; 2 * k <= top; ++k) {
        sum += (nu + 2.0L * k) * g * p[2 * k];
        g *= (nu + k) / (k + 1.0L);
    }
    return p[0] * std::pow(x / 2.0L, nu) / sum;
}

long double eval_j(long double nu, long double x) {
    if (x == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
    if (x <= kSeriesCrossover) return series_j(nu, x);
    return miller_j(nu, x);
}

struct ZeroKey {
    std::uint64_t nu_bits;
    int k;
    bool operator<(const ZeroKey& o) const {
        return nu_bits != o.nu_bits ? nu_bits < o.nu_bits : k < o.k;
    }
};

double refine_zero(double nu, double lo, double hi) {
    double flo = j(nu, lo);
    for (int it = 0; it < 80 && hi - lo > 1e-14 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = j(nu, mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // secant polish
    double a = lo, b = hi, fa = j(nu, a), fb = j(nu, b);
    for (int it = 0; it < 3 && fb != fa; ++it) {
        const double c = b - fb * (b - a) / (fb - fa);
        if (!(c > lo - 1.0 && c < hi + 1.0)) break;
        a = b;
        fa = fb;
        b = c;
        fb = j(nu, b);
    }
    return b;
}

}  // namespace

double j(double nu, double x) {
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw std::invalid_argument("bessel::j: order must be finite and >= 0");
    if (!(x >= 0.0) || !std::isfinite(x))
        throw std::invalid_argument("bessel::j: argument must be finite and >= 0");
    if (x > 2000.0 || nu > 500.0)
        throw std::invalid_argument("bessel::j: argument/order out of supported range");
    return static_cast<double>(eval_j(static_cast<long double>(nu), static_cast<long double>(x)));
}

double j_first_zero(double nu) { return j_zero(nu, 1); }

double j_zero(double nu, int k) {
    if (!(nu >= 0.0) || !std::isfinite(nu))
        throw std::invalid_argument("bessel::j_zero: order must be finite and >= 0");
    if (k < 1) throw std::invalid_argument("bessel::j_zero: k must be >= 1");

    static std::mutex mtx;
    static std::map<ZeroKey, double> cache;
    ZeroKey key{};
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&key.nu_bits, &nu, sizeof nu);
    key.k = k;
    {
        std::lock_guard<std::mutex> lock(mtx);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }

    // J_nu > 0 on (0, j_{nu,1}); zeros are >~ pi apart, so a 0.04-step scan
    // cannot skip a pair. First zero lies in (nu, nu+10] for nu <= 50.
    const double step = 0.04 * (1.0 + nu / 20.0);
    double x = nu + step * 0.5;
    double fx = j(nu, x);
    while (fx == 0.0) {
        x += step * 1e-3;
        fx = j(nu, x);
    }
    int found = 0;
    double zero = 0.0;
    const double limit = nu + 10.0 + 4.5 * (k - 1) + 5.0;
    while (found < k) {
        const double xn = x + step;
        if (xn > limit)
            throw std::runtime_error("bessel::j_zero: bracket scan failed for nu=" +
                                     std::to_string(nu));
        const double fn = j(nu, xn);
        if ((fx < 0) != (fn < 0)) {
            ++found;
            if (found == k) zero = refine_zero(nu, x, xn);
        }
        x = xn;
        fx = fn;
    }

    std::lock_guard<std::mutex> lock(mtx);
    cache.emplace(key, zero);
    return zero;
}

Ratio j_ratio(double num_nu, double den_nu, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("bessel::j_ratio: argument must be > 0");
    const double den = j(den_nu, x);
    if (std::fabs(den) < 1e-13) return {0.0, true};
    return {j(num_nu, x) / den, false};
}

}  // namespace wulff::bessel
