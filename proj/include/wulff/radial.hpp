#pragma once

#include "wulff/radial_profile.hpp"

namespace wulff::variational {

// Uniform radial grid for a Wulff set of radius R: interior nodes
// rho_j = j*h (j = 1..N) with h = R/(N+1), plus the origin as an extra
// unknown whose row encodes u'(0) = 0 through the zero-flux stencil.
// The discrete mass uses the coarea weights n*kappa*rho^{n-1}*h, with the
// half-cell measure kappa*(h/2)^n at the origin.
struct RadialGrid {
    int n;
    double R;
    int N;  // interior nodes, >= 16
    double kappa;

    RadialGrid(int n_, double R_, int N_, double kappa_);
    double h() const { return R / (N + 1); }
    double node(int j) const { return j * h(); }  // j = 0..N
    double weight(int j) const;
    double total_weight() const;  // ~ kappa * R^n
};

struct RadialSolveResult {
    double lambda = 0;
    RadialProfile u;  // nodes 0..N; u(R) = 0 implicit
    bool converged = false;
};

// Smallest eigenvalue of the radial operator -(u'' + (n-1)/rho u') with
// u'(0) = 0, u(R) = 0, discretized by conservative central differences.
// Sturm-sequence bisection on the generalized tridiagonal problem, then
// inverse iteration for the eigenvector (normalized to sum w u^2 = 1,
// positive).
RadialSolveResult radial_local_solve(const RadialGrid& grid);

struct PairSolveResult {
    double lambda = 0;
    RadialProfile u, v;      // components on W_{r1}, W_{r2} (u empty when r1 = 0)
    double average = 0;      // discrete integral of u + v for the eigenvector
    bool converged = false;
};

// Smallest eigenvalue of the two-component radial system with the
// nonlocal coupling alpha*(integral u + integral v)^2, discretized as a
// symmetric rank-one addition to the block-tridiagonal stiffness. N
// interior nodes per component. Any real alpha.
PairSolveResult radial_pair_nonlocal_solve(int n, double kappa, double r1, double r2,
                                           double alpha, int N);

}  // namespace wulff::variational
