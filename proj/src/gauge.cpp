#include "wulff/gauge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace wulff {

namespace {

double sq(double v) { return v * v; }

// volume of the unit p-ball in R^n: 2^n Gamma(1+1/p)^n / Gamma(1+n/p)
double p_ball_volume(int n, double p) {
    return std::pow(2.0, n) * std::pow(std::tgamma(1.0 + 1.0 / p), n) /
           std::tgamma(1.0 + static_cast<double>(n) / p);
}

double p_norm_raw(std::span<const double> x, double p) {
    double m = 0;
    for (double v : x) m = std::max(m, std::fabs(v));
    if (m == 0) return 0;
    double s = 0;
    for (double v : x) s += std::pow(std::fabs(v) / m, p);
    return m * std::pow(s, 1.0 / p);
}

std::vector<double> p_norm_gradient(std::span<const double> x, double p) {
    const double nrm = p_norm_raw(x, p);
    std::vector<double> g(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double a = std::fabs(x[i]);
        g[i] = a == 0 ? 0.0
                      : std::copysign(std::pow(a / nrm, p - 1.0), x[i]);
    }
    return g;
}

double quad_form(std::span<const double> x, const std::array<double, 4>& m) {
    return m[0] * x[0] * x[0] + 2.0 * m[1] * x[0] * x[1] + m[3] * x[1] * x[1];
}

// adaptive Simpson on [a,b]
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double eps,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (std::fabs(left + right - whole) <= 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    if (depth <= 0) throw std::runtime_error("gauge quadrature did not converge");
    // tolerance floor keeps the recursion from chasing rounding noise
    const double half_eps =
        std::max(eps / 2, 1e-16 * (std::fabs(left) + std::fabs(right)) + 5e-18);
    return adaptive_simpson(f, a, m, fa, flm, fm, left, half_eps, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, half_eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    // nine initial panels: an odd count keeps the dyadic sample lattice off
    // the 2- and 4-fold symmetry axes of typical gauges, which would
    // otherwise alias the integrand to a constant
    constexpr int panels = 9;
    double total = 0;
    for (int k = 0; k < panels; ++k) {
        const double pa = a + (b - a) * k / panels;
        const double pb = a + (b - a) * (k + 1) / panels;
        const double m = 0.5 * (pa + pb);
        const double fa = f(pa), fm = f(m), fb = f(pb);
        const double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += adaptive_simpson(f, pa, pb, fa, fm, fb, whole, eps / panels, 30);
    }
    return total;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

double unit_ball_volume(int n) {
    if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

std::string to_string(GaugeKind k) {
    switch (k) {
        case GaugeKind::euclidean: return "euclidean";
        case GaugeKind::p_norm: return "p-norm";
        case GaugeKind::ellipse: return "ellipse";
    }
    return "?";
}

Gauge Gauge::euclidean(int n) {
    if (n < 2) throw std::invalid_argument("Gauge: dimension must be >= 2");
    Gauge g;
    g.n_ = n;
    g.kind_ = GaugeKind::euclidean;
    g.scale_ = 1.0;
    g.bound_low_ = g.bound_high_ = 1.0;
    return g;
}

Gauge Gauge::p_norm(int n, double p) {
    if (n < 2) throw std::invalid_argument("Gauge: dimension must be >= 2");
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("Gauge: p must lie in (1, inf)");
    Gauge g;
    g.n_ = n;
    g.kind_ = GaugeKind::p_norm;
    g.p_ = p;
    // |{s*N_p < 1}| = V_p / s^n = omega_n
    g.scale_ = std::pow(p_ball_volume(n, p) / unit_ball_volume(n), 1.0 / n);
    const double diag = std::pow(n, 1.0 / p - 0.5);  // N_p on the diagonal unit vector
    g.bound_low_ = g.scale_ * std::min(1.0, diag);
    g.bound_high_ = g.scale_ * std::max(1.0, diag);
    return g;
}

Gauge Gauge::ellipse(double a11, double a12, double a22) {
    const double det = a11 * a22 - a12 * a12;
    if (!(a11 > 0.0) || !(det > 0.0))
        throw std::invalid_argument("Gauge: ellipse matrix must be SPD");
    Gauge g;
    g.n_ = 2;
    g.kind_ = GaugeKind::ellipse;
    g.mat_ = {a11, a12, a12, a22};
    g.inv_mat_ = {a22 / det, -a12 / det, -a12 / det, a11 / det};
    g.scale_ = std::pow(det, -0.25);  // |{H<1}| = omega_2 / (s^2 sqrt(det))
    const double tr2 = 0.5 * (a11 + a22);
    const double disc = std::sqrt(std::max(0.0, tr2 * tr2 - det));
    g.bound_low_ = g.scale_ * std::sqrt(tr2 - disc);
    g.bound_high_ = g.scale_ * std::sqrt(tr2 + disc);
    return g;
}

Gauge Gauge::parse(std::string_view spec, int n) {
    const std::string s = lower(spec);
    if (s == "euclidean") return euclidean(n);
    if (s.rfind("p:", 0) == 0) {
        size_t pos = 0;
        const double p = std::stod(s.substr(2), &pos);
        if (pos != s.size() - 2) throw std::invalid_argument("Gauge::parse: bad p value");
        return p_norm(n, p);
    }
    if (s.rfind("ellipse:", 0) == 0) {
        if (n != 2) throw std::invalid_argument("Gauge::parse: ellipse gauges are 2-D");
        double a[3];
        size_t start = 8;
        for (int k = 0; k < 3; ++k) {
            const size_t comma = s.find(',', start);
            const std::string tok =
                s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (tok.empty() || (k < 2 && comma == std::string::npos) ||
                (k == 2 && comma != std::string::npos))
                throw std::invalid_argument("Gauge::parse: ellipse needs a11,a12,a22");
            a[k] = std::stod(tok);
            start = comma + 1;
        }
        return ellipse(a[0], a[1], a[2]);
    }
    throw std::invalid_argument("Gauge::parse: unknown gauge spec '" + std::string(spec) + "'");
}

void Gauge::check_dim(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("Gauge: vector dimension mismatch");
}

double Gauge::value(std::span<const double> x) const {
    check_dim(x);
    switch (kind_) {
        case GaugeKind::euclidean: {
            double s = 0;
            for (double v : x) s += v * v;
            return scale_ * std::sqrt(s);
        }
        case GaugeKind::p_norm:
            return scale_ * p_norm_raw(x, p_);
        case GaugeKind::ellipse:
            return scale_ * std::sqrt(std::max(0.0, quad_form(x, mat_)));
    }
    return 0;
}

std::vector<double> Gauge::gradient(std::span<const double> x) const {
    check_dim(x);
    bool zero = true;
    for (double v : x) zero = zero && v == 0;
    if (zero) throw std::invalid_argument("Gauge::gradient undefined at the origin");
    switch (kind_) {
        case GaugeKind::euclidean: {
            double s = 0;
            for (double v : x) s += v * v;
            s = std::sqrt(s);
            std::vector<double> g(x.size());
            for (size_t i = 0; i < x.size(); ++i) g[i] = scale_ * x[i] / s;
            return g;
        }
        case GaugeKind::p_norm: {
            auto g = p_norm_gradient(x, p_);
            for (double& v : g) v *= scale_;
            return g;
        }
        case GaugeKind::ellipse: {
            const double h = std::sqrt(quad_form(x, mat_));
            std::vector<double> g(2);
            g[0] = scale_ * (mat_[0] * x[0] + mat_[1] * x[1]) / h;
            g[1] = scale_ * (mat_[2] * x[0] + mat_[3] * x[1]) / h;
            return g;
        }
    }
    return {};
}

double Gauge::polar_value(std::span<const double> x) const {
    check_dim(x);
    switch (kind_) {
        case GaugeKind::euclidean: {
            double s = 0;
            for (double v : x) s += v * v;
            return std::sqrt(s) / scale_;
        }
        case GaugeKind::p_norm: {
            const double q = p_ / (p_ - 1.0);
            return p_norm_raw(x, q) / scale_;
        }
        case GaugeKind::ellipse:
            return std::sqrt(std::max(0.0, quad_form(x, inv_mat_))) / scale_;
    }
    return 0;
}

std::vector<double> Gauge::polar_gradient(std::span<const double> x) const {
    check_dim(x);
    bool zero = true;
    for (double v : x) zero = zero && v == 0;
    if (zero) throw std::invalid_argument("Gauge::polar_gradient undefined at the origin");
    switch (kind_) {
        case GaugeKind::euclidean: {
            double s = 0;
            for (double v : x) s += v * v;
            s = std::sqrt(s);
            std::vector<double> g(x.size());
            for (size_t i = 0; i < x.size(); ++i) g[i] = x[i] / (s * scale_);
            return g;
        }
        case GaugeKind::p_norm: {
            const double q = p_ / (p_ - 1.0);
            auto g = p_norm_gradient(x, q);
            for (double& v : g) v /= scale_;
            return g;
        }
        case GaugeKind::ellipse: {
            const double h = std::sqrt(quad_form(x, inv_mat_));
            std::vector<double> g(2);
            g[0] = (inv_mat_[0] * x[0] + inv_mat_[1] * x[1]) / (h * scale_);
            g[1] = (inv_mat_[2] * x[0] + inv_mat_[3] * x[1]) / (h * scale_);
            return g;
        }
    }
    return {};
}

double Gauge::value2(double x, double y) const {
    const double v[2] = {x, y};
    return value(std::span<const double>(v, 2));
}

void Gauge::gradient2(double x, double y, double& gx, double& gy) const {
    if (n_ != 2) throw std::invalid_argument("Gauge::gradient2: gauge is not 2-D");
    switch (kind_) {
        case GaugeKind::euclidean: {
            const double s = std::sqrt(x * x + y * y);
            gx = scale_ * x / s;
            gy = scale_ * y / s;
            return;
        }
        case GaugeKind::p_norm: {
            const double ax = std::fabs(x), ay = std::fabs(y);
            const double m = std::max(ax, ay);
            const double nrm =
                m * std::pow(std::pow(ax / m, p_) + std::pow(ay / m, p_), 1.0 / p_);
            gx = ax == 0 ? 0.0 : std::copysign(scale_ * std::pow(ax / nrm, p_ - 1.0), x);
            gy = ay == 0 ? 0.0 : std::copysign(scale_ * std::pow(ay / nrm, p_ - 1.0), y);
            return;
        }
        case GaugeKind::ellipse: {
            const double v[2] = {x, y};
            const double h = std::sqrt(quad_form(std::span<const double>(v, 2), mat_));
            gx = scale_ * (mat_[0] * x + mat_[1] * y) / h;
            gy = scale_ * (mat_[2] * x + mat_[3] * y) / h;
            return;
        }
    }
}

double Gauge::polar_value2(double x, double y) const {
    const double v[2] = {x, y};
    return polar_value(std::span<const double>(v, 2));
}

PolarData Gauge::wulff_measure() const {
    PolarData pd;
    pd.kind = kind_;
    switch (kind_) {
        case GaugeKind::euclidean:
            pd.kappa_n = unit_ball_volume(n_);
            break;
        case GaugeKind::p_norm: {
            // W = {N_q < scale}: V_q(n) * scale^n
            const double q = p_ / (p_ - 1.0);
            pd.conjugate_p = q;
            pd.kappa_n = p_ball_volume(n_, q) * std::pow(scale_, n_);
            break;
        }
        case GaugeKind::ellipse: {
            // W = {x' A^{-1} x < scale^2}: omega_2 * scale^2 * sqrt(det A)
            const double det = mat_[0] * mat_[3] - mat_[1] * mat_[2];
            pd.inverse_matrix = inv_mat_;
            pd.kappa_n = unit_ball_volume(2) * sq(scale_) * std::sqrt(det);
            break;
        }
    }
    pd.gamma_n = n_ * pd.kappa_n;
    return pd;
}

std::array<double, 4> Gauge::identity_residuals(std::span<const double> x) const {
    check_dim(x);
    const auto gp = polar_gradient(x);
    const auto gh = gradient(x);
    const double hp = polar_value(x);
    const double h = value(x);
    const auto gh_at_gp = gradient(gp);
    const auto gp_at_gh = polar_gradient(gh);

    std::array<double, 4> r{};
    r[0] = std::fabs(value(gp) - 1.0);
    r[1] = std::fabs(polar_value(gh) - 1.0);
    double s2 = 0, s3 = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        s2 += sq(hp * gh_at_gp[i] - x[i]);
        s3 += sq(h * gp_at_gh[i] - x[i]);
    }
    r[2] = std::sqrt(s2);
    r[3] = std::sqrt(s3);
    return r;
}

double measure_by_quadrature(const Gauge& g) {
    if (g.dim() != 2)
        throw std::invalid_argument("measure_by_quadrature: implemented for n = 2 only");
    // |{H<1}| = 1/2 ∫ r(phi)^2 dphi with r = 1/H(unit direction)
    auto f = [&g](double phi) {
        const double d[2] = {std::cos(phi), std::sin(phi)};
        const double h = g.value(std::span<const double>(d, 2));
        return 0.5 / (h * h);
    };
    return integrate(f, 0.0, 2.0 * std::numbers::pi, 1e-11);
}

double polar_measure_by_quadrature(const Gauge& g) {
    if (g.dim() != 2)
        throw std::invalid_argument("polar_measure_by_quadrature: implemented for n = 2 only");
    auto f = [&g](double phi) {
        const double d[2] = {std::cos(phi), std::sin(phi)};
        const double h = g.polar_value(std::span<const double>(d, 2));
        return 0.5 / (h * h);
    };
    return integrate(f, 0.0, 2.0 * std::numbers::pi, 1e-11);
}

}  // namespace wulff
