#include "wulff/radial.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wulff::variational {

namespace {

// One symmetric tridiagonal block: conservative discretization of
// -(rho^{n-1} u')' / rho^{n-1} on (0, R), u'(0)=0, u(R)=0, scaled by the
// coarea factor n*kappa so that the mass matrix is the quadrature weight.
struct Block {
    std::vector<double> d;  // diagonal of K
    std::vector<double> e;  // sub/super diagonal (size d.size()-1)
    std::vector<double> w;  // diagonal mass
};

Block assemble(int n, double kappa, double R, int N) {
    const double h = R / (N + 1);
    const int m = N + 1;  // unknowns: origin + interior nodes
    auto flux = [&](double rho_half) { return n * kappa * std::pow(rho_half, n - 1) / h; };
    Block b;
    b.d.resize(m);
    b.e.resize(m - 1);
    b.w.resize(m);
    b.d[0] = flux(0.5 * h);
    b.w[0] = kappa * std::pow(0.5 * h, n);
    for (int j = 1; j <= N; ++j) {
        b.d[j] = flux((j - 0.5) * h) + flux((j + 0.5) * h);
        b.w[j] = n * kappa * std::pow(j * h, n - 1) * h;
    }
    // the outer strip [R-h/2, R] belongs to the last node, so the weights
    // form an O(h^2) partition of kappa R^n
    b.w[N] += kappa * (std::pow(R, n) - std::pow(R - 0.5 * h, n));
    for (int j = 0; j < N; ++j) b.e[j] = -flux((j + 0.5) * h);
    return b;
}

struct System {
    std::vector<Block> blocks;
    double alpha = 0;
    std::vector<double> m_vec;  // stacked mass weights: m'x = discrete integral
    size_t size = 0;
    double weight_sum = 0;
};

// LDL^T pivots of (K - sigma*W) per block; returns negative-pivot count
// and leaves the pivots for reuse by the solver. false on a breakdown
// (an exactly zero pivot), in which case the caller nudges sigma.
bool ldl_pivots(const Block& b, double sigma, std::vector<double>& piv, int& negs) {
    const size_t m = b.d.size();
    piv.resize(m);
    double p = b.d[0] - sigma * b.w[0];
    if (p == 0.0) return false;
    piv[0] = p;
    negs += p < 0;
    for (size_t j = 1; j < m; ++j) {
        p = b.d[j] - sigma * b.w[j] - b.e[j - 1] * b.e[j - 1] / piv[j - 1];
        if (p == 0.0) return false;
        piv[j] = p;
        negs += p < 0;
    }
    return true;
}

// solve (K - sigma*W) x = rhs with the precomputed pivots (LDL^T sweep)
void ldl_solve(const Block& b, const std::vector<double>& piv, std::vector<double>& x) {
    const size_t m = b.d.size();
    for (size_t j = 1; j < m; ++j) x[j] -= b.e[j - 1] / piv[j - 1] * x[j - 1];
    for (size_t j = 0; j < m; ++j) x[j] /= piv[j];
    for (size_t j = m - 1; j-- > 0;) x[j] -= b.e[j] / piv[j] * x[j + 1];
}

// eigenvalue count of (K + alpha m m', W) below sigma; rank-one handled by
// the determinant-ratio sign 1 + alpha m' (K - sigma W)^{-1} m
int count_below(const System& sys, double sigma, bool& ok) {
    ok = true;
    int negs = 0;
    std::vector<std::vector<double>> pivs(sys.blocks.size());
    for (size_t k = 0; k < sys.blocks.size(); ++k) {
        if (!ldl_pivots(sys.blocks[k], sigma, pivs[k], negs)) {
            ok = false;
            return 0;
        }
    }
    if (sys.alpha != 0.0) {
        double dot = 0;
        size_t off = 0;
        for (size_t k = 0; k < sys.blocks.size(); ++k) {
            const size_t m = sys.blocks[k].d.size();
            std::vector<double> x(sys.m_vec.begin() + off, sys.m_vec.begin() + off + m);
            ldl_solve(sys.blocks[k], pivs[k], x);
            for (size_t j = 0; j < m; ++j) dot += sys.m_vec[off + j] * x[j];
            off += m;
        }
        const double f = 1.0 + sys.alpha * dot;
        if (f < 0) negs += sys.alpha > 0 ? -1 : 1;
    }
    return negs;
}

int count_below_robust(const System& sys, double sigma) {
    bool ok = false;
    double s = sigma;
    for (int attempt = 0; attempt < 6; ++attempt) {
        const int c = count_below(sys, s, ok);
        if (ok) return c;
        s = s * (1.0 + 1e-13) + 1e-300;
    }
    throw std::runtime_error("radial solver: persistent pivot breakdown");
}

struct EigenPair {
    double lambda;
    std::vector<double> vec;
    bool converged;
};

EigenPair smallest_eigenpair(const System& sys) {
    // bracket: alpha>=0 keeps the form positive definite; alpha<0 lowers
    // the spectrum by at most |alpha| * (sum of weights)
    double lo = sys.alpha < 0 ? sys.alpha * sys.weight_sum - 1.0 : 0.0;
    double hi = 1.0 + std::max(0.0, sys.alpha) * sys.weight_sum;
    for (const Block& b : sys.blocks) {
        const size_t m = b.d.size();
        for (size_t j = 0; j < m; ++j) {
            double row = b.d[j];
            if (j > 0) row += std::fabs(b.e[j - 1]);
            if (j + 1 < m) row += std::fabs(b.e[j]);
            hi = std::max(hi, row / b.w[j] + std::max(0.0, sys.alpha) * sys.weight_sum + 1.0);
        }
    }
    if (count_below_robust(sys, lo) != 0)
        throw std::runtime_error("radial solver: lower bracket not below the spectrum");

    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::fabs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (count_below_robust(sys, mid) >= 1)
            hi = mid;
        else
            lo = mid;
    }

    // inverse iteration at the certified lower end (SPD there)
    const double sigma = lo;
    std::vector<std::vector<double>> pivs(sys.blocks.size());
    int negs = 0;
    for (size_t k = 0; k < sys.blocks.size(); ++k)
        if (!ldl_pivots(sys.blocks[k], sigma, pivs[k], negs))
            throw std::runtime_error("radial solver: factorization failed at the shift");

    auto block_solve = [&](std::vector<double>& x) {
        size_t off = 0;
        for (size_t k = 0; k < sys.blocks.size(); ++k) {
            const size_t m = sys.blocks[k].d.size();
            std::vector<double> seg(x.begin() + off, x.begin() + off + m);
            ldl_solve(sys.blocks[k], pivs[k], seg);
            std::copy(seg.begin(), seg.end(), x.begin() + off);
            off += m;
        }
    };

    std::vector<double> binv_m;
    double sm_denom = 1.0;
    if (sys.alpha != 0.0) {
        binv_m = sys.m_vec;
        block_solve(binv_m);
        double dot = 0;
        for (size_t j = 0; j < sys.size; ++j) dot += sys.m_vec[j] * binv_m[j];
        sm_denom = 1.0 + sys.alpha * dot;
    }
    auto shifted_solve = [&](std::vector<double>& x) {
        block_solve(x);
        if (sys.alpha != 0.0) {
            double mtx = 0;
            for (size_t j = 0; j < sys.size; ++j) mtx += sys.m_vec[j] * x[j];
            const double coef = sys.alpha * mtx / sm_denom;
            for (size_t j = 0; j < sys.size; ++j) x[j] -= coef * binv_m[j];
        }
    };

    // start with content in every symmetry class: an all-ones vector is
    // W-orthogonal to the antisymmetric ground mode of an equal-radii pair
    std::vector<double> v(sys.size);
    for (size_t j = 0; j < sys.size; ++j) v[j] = 1.0 + 0.5 * std::sin(2.3 * j + 0.7);
    const double bisected = 0.5 * (lo + hi);
    const double width = hi - lo;
    double lambda = bisected;
    for (int it = 0; it < 12; ++it) {
        std::vector<double> x(sys.size);
        size_t off = 0;
        for (const Block& b : sys.blocks) {
            for (size_t j = 0; j < b.d.size(); ++j) x[off + j] = b.w[j] * v[off + j];
            off += b.d.size();
        }
        shifted_solve(x);
        double norm2 = 0;
        off = 0;
        for (const Block& b : sys.blocks) {
            for (size_t j = 0; j < b.d.size(); ++j) norm2 += b.w[j] * x[off + j] * x[off + j];
            off += b.d.size();
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& t : x) t *= inv;
        v = std::move(x);
        // Rayleigh quotient of the current iterate
        double num = 0, mtv = 0;
        off = 0;
        for (const Block& b : sys.blocks) {
            const size_t m = b.d.size();
            for (size_t j = 0; j < m; ++j) {
                double kv = b.d[j] * v[off + j];
                if (j > 0) kv += b.e[j - 1] * v[off + j - 1];
                if (j + 1 < m) kv += b.e[j] * v[off + j + 1];
                num += v[off + j] * kv;
            }
            off += m;
        }
        for (size_t j = 0; j < sys.size; ++j) mtv += sys.m_vec[j] * v[j];
        const double rq = num + sys.alpha * mtv * mtv;  // v'Wv = 1
        if (std::fabs(rq - lambda) < 1e-13 * std::max(1.0, std::fabs(rq)) && it >= 2) {
            lambda = rq;
            break;
        }
        lambda = rq;
    }

    // the Sturm bisection owns the eigenvalue; the Rayleigh quotient only
    // polishes it when the iterate actually landed on that eigenvector
    if (!std::isfinite(lambda) ||
        std::fabs(lambda - bisected) > 100.0 * width + 1e-9 * std::fabs(bisected)) {
        lambda = bisected;
        bool bad = false;
        for (double t : v) bad = bad || !std::isfinite(t);
        if (bad) v.assign(sys.size, 0.0);
    }

    // residual check: ||(K + alpha mm')v - lambda W v|| against the row scale
    double res2 = 0, scale2 = 0, mtv = 0;
    for (size_t j = 0; j < sys.size; ++j) mtv += sys.m_vec[j] * v[j];
    size_t off = 0;
    for (const Block& b : sys.blocks) {
        const size_t m = b.d.size();
        for (size_t j = 0; j < m; ++j) {
            double kv = b.d[j] * v[off + j];
            if (j > 0) kv += b.e[j - 1] * v[off + j - 1];
            if (j + 1 < m) kv += b.e[j] * v[off + j + 1];
            kv += sys.alpha * mtv * sys.m_vec[off + j];
            const double r = kv - lambda * b.w[j] * v[off + j];
            res2 += r * r;
            scale2 += kv * kv;
        }
        off += m;
    }
    EigenPair out;
    out.lambda = lambda;
    out.vec = std::move(v);
    out.converged = res2 <= 1e-16 * std::max(scale2, 1e-30);
    return out;
}

RadialProfile extract_profile(const std::vector<double>& v, size_t off, double R, int N) {
    RadialProfile p;
    p.R = R;
    const double h = R / (N + 1);
    p.rho.resize(N + 2);
    p.values.resize(N + 2);
    for (int j = 0; j <= N; ++j) {
        p.rho[j] = j * h;
        p.values[j] = v[off + j];
    }
    p.rho[N + 1] = R;
    p.values[N + 1] = 0.0;
    return p;
}

void fix_sign(std::vector<double>& v) {
    double m = 0;
    size_t arg = 0;
    for (size_t j = 0; j < v.size(); ++j)
        if (std::fabs(v[j]) > m) {
            m = std::fabs(v[j]);
            arg = j;
        }
    if (v[arg] < 0)
        for (double& t : v) t = -t;
}

}  // namespace

RadialGrid::RadialGrid(int n_, double R_, int N_, double kappa_)
    : n(n_), R(R_), N(N_), kappa(kappa_) {
    if (n < 2) throw std::invalid_argument("RadialGrid: dimension must be >= 2");
    if (!(R > 0)) throw std::invalid_argument("RadialGrid: R must be > 0");
    if (N < 16) throw std::invalid_argument("RadialGrid: need at least 16 interior nodes");
    if (!(kappa > 0)) throw std::invalid_argument("RadialGrid: kappa must be > 0");
}

double RadialGrid::weight(int j) const {
    if (j == 0) return kappa * std::pow(0.5 * h(), n);
    double w = n * kappa * std::pow(node(j), n - 1) * h();
    if (j == N) w += kappa * (std::pow(R, n) - std::pow(R - 0.5 * h(), n));
    return w;
}

double RadialGrid::total_weight() const {
    double s = 0;
    for (int j = 0; j <= N; ++j) s += weight(j);
    return s;
}

RadialSolveResult radial_local_solve(const RadialGrid& grid) {
    System sys;
    sys.blocks.push_back(assemble(grid.n, grid.kappa, grid.R, grid.N));
    sys.alpha = 0;
    sys.size = sys.blocks[0].d.size();
    sys.m_vec = sys.blocks[0].w;
    for (double w : sys.m_vec) sys.weight_sum += w;

    auto ep = smallest_eigenpair(sys);
    fix_sign(ep.vec);
    RadialSolveResult out;
    out.lambda = ep.lambda;
    out.converged = ep.converged;
    out.u = extract_profile(ep.vec, 0, grid.R, grid.N);
    return out;
}

PairSolveResult radial_pair_nonlocal_solve(int n, double kappa, double r1, double r2, double alpha,
                                           int N) {
    if (n < 2) throw std::invalid_argument("radial_pair_nonlocal_solve: dimension must be >= 2");
    if (r1 > r2) std::swap(r1, r2);
    if (r1 < 0 || !(r2 > 0))
        throw std::invalid_argument("radial_pair_nonlocal_solve: need 0 <= r1 <= r2, r2 > 0");
    if (N < 16) throw std::invalid_argument("radial_pair_nonlocal_solve: N must be >= 16");

    System sys;
    if (r1 > 0) sys.blocks.push_back(assemble(n, kappa, r1, N));
    sys.blocks.push_back(assemble(n, kappa, r2, N));
    sys.alpha = alpha;
    for (const Block& b : sys.blocks) {
        sys.m_vec.insert(sys.m_vec.end(), b.w.begin(), b.w.end());
        sys.size += b.d.size();
    }
    for (double w : sys.m_vec) sys.weight_sum += w;

    auto ep = smallest_eigenpair(sys);
    fix_sign(ep.vec);

    PairSolveResult out;
    out.lambda = ep.lambda;
    out.converged = ep.converged;
    size_t off = 0;
    if (r1 > 0) {
        out.u = extract_profile(ep.vec, 0, r1, N);
        off = sys.blocks[0].d.size();
    }
    out.v = extract_profile(ep.vec, off, r2, N);
    for (size_t j = 0; j < sys.size; ++j) out.average += sys.m_vec[j] * ep.vec[j];
    return out;
}

}  // namespace wulff::variational
