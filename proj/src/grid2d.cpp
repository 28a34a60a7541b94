#include "wulff/grid2d.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

namespace wulff::variational {

namespace {

void validate(const CartesianGrid2D& g) {
    if (g.nx < 3 || g.ny < 3) throw std::invalid_argument("grid too small");
    if (!(g.h > 0)) throw std::invalid_argument("grid spacing must be > 0");
    if (static_cast<int>(g.mask.size()) != g.nx * g.ny)
        throw std::invalid_argument("mask size mismatch");
    for (int i = 0; i < g.nx; ++i)
        if (g.inside(i, 0) || g.inside(i, g.ny - 1))
            throw std::invalid_argument("mask touches the grid edge");
    for (int j = 0; j < g.ny; ++j)
        if (g.inside(0, j) || g.inside(g.nx - 1, j))
            throw std::invalid_argument("mask touches the grid edge");
    if (g.count() < 9) throw std::invalid_argument("mask has fewer than 9 nodes");
}

CartesianGrid2D centered_grid(double half_extent, double h) {
    CartesianGrid2D g;
    g.h = h;
    const int m = static_cast<int>(std::ceil(half_extent / h));
    g.nx = g.ny = 2 * m + 1;
    g.x0 = -m * h;
    g.y0 = -m * h;
    g.mask.assign(static_cast<size_t>(g.nx) * g.ny, 0);
    return g;
}

// 2x2 SPD form of H^2 for the quadratic gauges, or nullopt
struct QuadForm {
    double q00, q01, q11;
};
bool quadratic_form(const Gauge& g, QuadForm& q) {
    if (g.dim() != 2) return false;
    const double s2 = g.scale() * g.scale();
    switch (g.kind()) {
        case GaugeKind::euclidean:
            q = {s2, 0, s2};
            return true;
        case GaugeKind::p_norm:
            if (g.p() == 2.0) {
                q = {s2, 0, s2};
                return true;
            }
            return false;
        case GaugeKind::ellipse: {
            const double e1[2] = {1, 0}, e2[2] = {0, 1}, d[2] = {1, 1};
            const double a = g.value(std::span<const double>(e1, 2));
            const double b = g.value(std::span<const double>(e2, 2));
            const double c = g.value(std::span<const double>(d, 2));
            q.q00 = a * a;
            q.q11 = b * b;
            q.q01 = 0.5 * (c * c - q.q00 - q.q11);
            return true;
        }
    }
    return false;
}

}  // namespace

int CartesianGrid2D::count() const {
    int c = 0;
    for (auto m : mask) c += m != 0;
    return c;
}

double CartesianGrid2D::perimeter_estimate() const {
    int b = 0;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (!inside(i, j)) continue;
            if (!inside(i - 1, j) || !inside(i + 1, j) || !inside(i, j - 1) || !inside(i, j + 1))
                ++b;
        }
    return b * h;
}

CartesianGrid2D make_disk_grid(double area, double h) {
    if (!(area > 0)) throw std::invalid_argument("make_disk_grid: area must be > 0");
    const double r = std::sqrt(area / std::numbers::pi);
    CartesianGrid2D g = centered_grid(r + 2 * h, h);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.x(i) * g.x(i) + g.y(j) * g.y(j) < r * r) g.mask[g.index(i, j)] = 1;
    validate(g);
    return g;
}

CartesianGrid2D make_square_grid(double area, double h) {
    if (!(area > 0)) throw std::invalid_argument("make_square_grid: area must be > 0");
    const double half = 0.5 * std::sqrt(area);
    CartesianGrid2D g = centered_grid(half + 2 * h, h);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (std::fabs(g.x(i)) < half && std::fabs(g.y(j)) < half) g.mask[g.index(i, j)] = 1;
    validate(g);
    return g;
}

CartesianGrid2D make_wulff_grid(const Gauge& g2, double area, double h) {
    if (g2.dim() != 2) throw std::invalid_argument("make_wulff_grid: gauge must be 2-D");
    if (!(area > 0)) throw std::invalid_argument("make_wulff_grid: area must be > 0");
    const double kappa = g2.wulff_measure().kappa_n;
    const double R = std::sqrt(area / kappa);
    double min_dir = 1e300;
    for (int k = 0; k < 512; ++k) {
        const double phi = 2 * std::numbers::pi * k / 512;
        min_dir = std::min(min_dir, g2.polar_value2(std::cos(phi), std::sin(phi)));
    }
    CartesianGrid2D g = centered_grid(R / min_dir + 3 * h, h);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g2.polar_value2(g.x(i), g.y(j)) < R) g.mask[g.index(i, j)] = 1;
    validate(g);
    return g;
}

CartesianGrid2D load_mask(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open mask file " + path);
    CartesianGrid2D g;
    if (!(in >> g.nx >> g.ny >> g.h)) throw std::runtime_error("bad mask header in " + path);
    g.x0 = -(g.nx - 1) * g.h / 2;
    g.y0 = -(g.ny - 1) * g.h / 2;
    g.mask.reserve(static_cast<size_t>(g.nx) * g.ny);
    char c;
    while (static_cast<int>(g.mask.size()) < g.nx * g.ny && in >> c) {
        if (c == '0')
            g.mask.push_back(0);
        else if (c == '1')
            g.mask.push_back(1);
        else
            throw std::runtime_error("bad mask character in " + path);
    }
    if (static_cast<int>(g.mask.size()) != g.nx * g.ny)
        throw std::runtime_error("truncated mask in " + path);
    validate(g);
    return g;
}

void save_mask(const CartesianGrid2D& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write mask file " + path);
    out << g.nx << ' ' << g.ny << ' ' << g.h << '\n';
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) out << (g.mask[g.index(i, j)] ? '1' : '0');
        out << '\n';
    }
}

GridFunction::GridFunction(std::shared_ptr<const CartesianGrid2D> g)
    : grid(std::move(g)), values(static_cast<size_t>(grid->nx) * grid->ny, 0.0) {}

void GridFunction::conform() {
    for (size_t k = 0; k < values.size(); ++k)
        if (!grid->mask[k]) values[k] = 0.0;
}

double GridFunction::integral() const {
    double s = 0;
    for (size_t k = 0; k < values.size(); ++k)
        if (grid->mask[k]) s += values[k];
    return s * grid->h * grid->h;
}

double GridFunction::l2_norm_sq() const {
    double s = 0;
    for (size_t k = 0; k < values.size(); ++k)
        if (grid->mask[k]) s += values[k] * values[k];
    return s * grid->h * grid->h;
}

void write_csv(const GridFunction& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "i,j,x,y,u\n";
    const auto& g = *u.grid;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.inside(i, j))
                out << i << ',' << j << ',' << g.x(i) << ',' << g.y(j) << ','
                    << u.values[g.index(i, j)] << '\n';
}

double dirichlet_energy(const GridFunction& u, const Gauge& gauge) {
    const auto& g = *u.grid;
    double e = 0;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            const int p = g.index(i, j);
            const double dx = u.values[p + 1] - u.values[p];
            const double dy = u.values[p + g.nx] - u.values[p];
            if (dx == 0 && dy == 0) continue;
            const double hc = gauge.value2(dx, dy);
            e += hc * hc;
        }
    return e;
}

double rayleigh_quotient(const GridFunction& u, const Gauge& gauge, double alpha) {
    const double den = u.l2_norm_sq();
    if (den == 0) throw std::invalid_argument("rayleigh_quotient: u is identically zero");
    const double avg = u.integral();
    return (dirichlet_energy(u, gauge) + alpha * avg * avg) / den;
}

namespace {

// ---- quadratic path -------------------------------------------------

struct StencilOp {
    const CartesianGrid2D* g;
    QuadForm q;

    // y = K v (v must vanish off-mask; rows off-mask are eliminated)
    void apply(const std::vector<double>& v, std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        const int nx = g->nx;
        for (int j = 0; j + 1 < g->ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                const int p = j * nx + i;
                const double dx = v[p + 1] - v[p];
                const double dy = v[p + nx] - v[p];
                if (dx == 0 && dy == 0) continue;
                const double qx = q.q00 * dx + q.q01 * dy;
                const double qy = q.q01 * dx + q.q11 * dy;
                y[p + 1] += qx;
                y[p + nx] += qy;
                y[p] -= qx + qy;
            }
        for (size_t k = 0; k < y.size(); ++k)
            if (!g->mask[k]) y[k] = 0.0;
    }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// plain CG on the stencil operator; x is the warm start
int conjugate_gradient(const StencilOp& op, const std::vector<double>& b, std::vector<double>& x,
                       double rel_tol, int max_it) {
    std::vector<double> r(b.size()), p(b.size()), ap(b.size());
    op.apply(x, ap);
    for (size_t k = 0; k < b.size(); ++k) r[k] = b[k] - ap[k];
    p = r;
    double rr = dot(r, r);
    const double target = rel_tol * rel_tol * std::max(dot(b, b), 1e-300);
    int it = 0;
    for (; it < max_it && rr > target; ++it) {
        op.apply(p, ap);
        const double alpha = rr / dot(p, ap);
        for (size_t k = 0; k < b.size(); ++k) {
            x[k] += alpha * p[k];
            r[k] -= alpha * ap[k];
        }
        const double rr_new = dot(r, r);
        const double beta = rr_new / rr;
        rr = rr_new;
        for (size_t k = 0; k < b.size(); ++k) p[k] = r[k] + beta * p[k];
    }
    return it;
}

std::vector<double> positive_bump(const CartesianGrid2D& g) {
    int imin = g.nx, imax = -1, jmin = g.ny, jmax = -1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.inside(i, j)) {
                imin = std::min(imin, i);
                imax = std::max(imax, i);
                jmin = std::min(jmin, j);
                jmax = std::max(jmax, j);
            }
    std::vector<double> v(static_cast<size_t>(g.nx) * g.ny, 0.0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.inside(i, j)) {
                const double xi = imax > imin ? 2.0 * (i - imin) / (imax - imin) - 1.0 : 0.0;
                const double et = jmax > jmin ? 2.0 * (j - jmin) / (jmax - jmin) - 1.0 : 0.0;
                v[g.index(i, j)] = std::cos(0.5 * std::numbers::pi * xi) *
                                   std::cos(0.5 * std::numbers::pi * et);
            }
    return v;
}

MinimizeResult quadratic_minimize(const CartesianGrid2D& grid, const QuadForm& q, double alpha,
                                  const MinimizeOptions& opts) {
    const double h2 = grid.h * grid.h;
    StencilOp op{&grid, q};
    const size_t nn = grid.mask.size();

    std::vector<double> m(nn, 0.0);  // m'v = h^2 sum v = discrete integral
    for (size_t k = 0; k < nn; ++k)
        if (grid.mask[k]) m[k] = h2;

    std::vector<double> kinv_m(nn, 0.0);
    double sm_den = 1.0;
    if (alpha != 0.0) {
        conjugate_gradient(op, m, kinv_m, 1e-12, 200000);
        sm_den = 1.0 + alpha * dot(m, kinv_m);
        if (sm_den <= 0)
            throw std::runtime_error(
                "minimize_rayleigh: alpha too negative for the direct path on this grid");
    }

    std::vector<double> v = positive_bump(grid);
    const double n0 = std::sqrt(h2 * dot(v, v));
    for (auto& t : v) t /= n0;

    std::vector<double> x(nn, 0.0), kv(nn);
    double lambda = 0;
    bool converged = false;
    int total_inner = 0;
    for (int outer = 0; outer < 160; ++outer) {
        std::vector<double> b(nn);
        for (size_t k = 0; k < nn; ++k) b[k] = h2 * v[k];
        total_inner += conjugate_gradient(op, b, x, 1e-11, 200000);
        if (alpha != 0.0) {
            const double mtx = dot(m, x);
            const double coef = alpha * mtx / sm_den;
            for (size_t k = 0; k < nn; ++k) x[k] -= coef * kinv_m[k];
        }
        const double nrm = std::sqrt(h2 * dot(x, x));
        for (size_t k = 0; k < nn; ++k) x[k] /= nrm;
        op.apply(x, kv);
        const double mtv = dot(m, x);
        lambda = dot(x, kv) + alpha * mtv * mtv;
        v = x;
        // eigenproblem residual drives the exit, not an eigenvalue stall
        double r2 = 0, s2 = 0;
        for (size_t k = 0; k < nn; ++k) {
            if (!grid.mask[k]) continue;
            const double row = kv[k] + alpha * mtv * m[k] - lambda * h2 * v[k];
            r2 += row * row;
            s2 += (lambda * h2 * v[k]) * (lambda * h2 * v[k]);
        }
        if (outer >= 2 && r2 <= opts.eig_tol * opts.eig_tol * std::max(s2, 1e-300)) {
            converged = true;
            break;
        }
    }

    MinimizeResult res{0, GridFunction(std::make_shared<CartesianGrid2D>(grid)), false,
                       total_inner, 0};
    res.lambda = lambda;
    res.u.values = v;
    res.u.conform();
    res.converged = converged;
    return res;
}

// ---- descent path ---------------------------------------------------

struct EnergyModel {
    const CartesianGrid2D* g;
    const Gauge* gauge;
    double alpha;
    double h2;

    double energy(const std::vector<double>& v) const {
        double e = 0, sum = 0;
        const int nx = g->nx;
        for (int j = 0; j + 1 < g->ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                const int p = j * nx + i;
                const double dx = v[p + 1] - v[p];
                const double dy = v[p + nx] - v[p];
                if (dx != 0 || dy != 0) {
                    const double hc = gauge->value2(dx, dy);
                    e += hc * hc;
                }
            }
        for (size_t k = 0; k < v.size(); ++k)
            if (g->mask[k]) sum += v[k];
        const double avg = h2 * sum;
        return e + alpha * avg * avg;
    }

    void grad(const std::vector<double>& v, std::vector<double>& out) const {
        std::fill(out.begin(), out.end(), 0.0);
        const int nx = g->nx;
        for (int j = 0; j + 1 < g->ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                const int p = j * nx + i;
                const double dx = v[p + 1] - v[p];
                const double dy = v[p + nx] - v[p];
                if (dx == 0 && dy == 0) continue;
                const double hc = gauge->value2(dx, dy);
                if (hc == 0) continue;
                double gx, gy;
                gauge->gradient2(dx, dy, gx, gy);
                out[p + 1] += 2 * hc * gx;
                out[p + nx] += 2 * hc * gy;
                out[p] -= 2 * hc * (gx + gy);
            }
        double sum = 0;
        for (size_t k = 0; k < v.size(); ++k)
            if (g->mask[k]) sum += v[k];
        const double coef = 2 * alpha * h2 * h2 * sum;
        for (size_t k = 0; k < v.size(); ++k)
            if (g->mask[k]) out[k] += coef;
        for (size_t k = 0; k < v.size(); ++k)
            if (!g->mask[k]) out[k] = 0.0;
    }
};

struct DescentOutcome {
    double lambda;
    std::vector<double> v;
    int iterations;
    double pg_norm;
    bool converged;
};

DescentOutcome descend(const EnergyModel& em, std::vector<double> v,
                       const MinimizeOptions& opts) {
    const double h2 = em.h2;
    const size_t nn = v.size();
    auto normalize = [&](std::vector<double>& u) {
        const double n = std::sqrt(h2 * dot(u, u));
        for (auto& t : u) t /= n;
    };
    normalize(v);

    std::vector<double> gr(nn), dir(nn), v_prev, d_prev;
    double e = em.energy(v);
    double step = 1.0;
    DescentOutcome out{e, v, 0, 1e300, false};

    for (int it = 0; it < opts.max_iterations; ++it) {
        em.grad(v, gr);
        // tangent direction in the M = h^2 I metric
        const double ug = dot(v, gr);
        double pg2 = 0;
        for (size_t k = 0; k < nn; ++k) {
            dir[k] = gr[k] / h2 - ug * v[k];
            pg2 += dir[k] * dir[k] * h2;
        }
        const double pg = std::sqrt(pg2);
        out.pg_norm = pg;
        if (pg <= opts.grad_tol * (1.0 + std::fabs(e))) {
            out.converged = true;
            out.iterations = it;
            break;
        }
        if (!v_prev.empty()) {
            // Barzilai-Borwein step from the last displacement/gradient pair
            double ss = 0, sy = 0;
            for (size_t k = 0; k < nn; ++k) {
                const double s = v[k] - v_prev[k];
                const double y = dir[k] - d_prev[k];
                ss += s * s;
                sy += s * y;
            }
            step = sy > 0 ? ss / sy : step * 2.0;
            step = std::clamp(step, 1e-12, 1e6);
        }
        v_prev = v;
        d_prev = dir;
        double t = step;
        std::vector<double> trial(nn);
        double e_new = 0;
        for (int back = 0; back < 40; ++back) {
            for (size_t k = 0; k < nn; ++k) trial[k] = v[k] - t * dir[k];
            normalize(trial);
            e_new = em.energy(trial);
            if (e_new <= e + 1e-14 * std::fabs(e)) break;
            t *= 0.5;
        }
        v = trial;
        e = e_new;
        out.iterations = it + 1;
    }
    out.lambda = e;
    out.v = std::move(v);
    return out;
}

MinimizeResult descent_minimize(const CartesianGrid2D& grid, const Gauge& gauge, double alpha,
                                const MinimizeOptions& opts) {
    EnergyModel em{&grid, &gauge, alpha, grid.h * grid.h};
    const size_t nn = grid.mask.size();

    auto run1 = descend(em, positive_bump(grid), opts);

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> rnd(nn, 0.0);
    for (size_t k = 0; k < nn; ++k)
        if (grid.mask[k]) rnd[k] = uni(rng);
    auto run2 = descend(em, std::move(rnd), opts);

    const auto& best = run1.lambda <= run2.lambda ? run1 : run2;
    MinimizeResult res{best.lambda, GridFunction(std::make_shared<CartesianGrid2D>(grid)),
                       best.converged, run1.iterations + run2.iterations, best.pg_norm};
    res.u.values = best.v;
    res.u.conform();
    return res;
}

}  // namespace

MinimizeResult minimize_rayleigh(const CartesianGrid2D& grid, const Gauge& gauge, double alpha,
                                 const MinimizeOptions& opts) {
    validate(grid);
    if (gauge.dim() != 2) throw std::invalid_argument("minimize_rayleigh: gauge must be 2-D");
    QuadForm q{};
    if (!opts.force_descent && quadratic_form(gauge, q))
        return quadratic_minimize(grid, q, alpha, opts);
    return descent_minimize(grid, gauge, alpha, opts);
}

}  // namespace wulff::variational
