#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "wulff/gauge.hpp"

namespace wulff::variational {

// Node-centered 2-D Cartesian grid with a boolean inclusion mask.
// Node (i, j) sits at (x0 + i*h, y0 + j*h); masks never touch the grid
// edge, so forward differences into the zero extension stay in range.
struct CartesianGrid2D {
    int nx = 0, ny = 0;
    double h = 0;
    double x0 = 0, y0 = 0;
    std::vector<std::uint8_t> mask;  // row-major: idx = j*nx + i

    int index(int i, int j) const { return j * nx + i; }
    bool inside(int i, int j) const {
        return i >= 0 && j >= 0 && i < nx && j < ny && mask[index(i, j)] != 0;
    }
    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }
    int count() const;
    double area() const { return count() * h * h; }
    // h * (number of mask nodes with an off-mask 4-neighbor)
    double perimeter_estimate() const;
};

CartesianGrid2D make_disk_grid(double area, double h);
CartesianGrid2D make_square_grid(double area, double h);
// mask of the centered Wulff set {H°(x) < R} with kappa R^2 = area
CartesianGrid2D make_wulff_grid(const Gauge& g, double area, double h);

// Plain-text mask format: first line "nx ny h", then nx*ny characters
// '0'/'1' row-major (whitespace between characters is ignored).
CartesianGrid2D load_mask(const std::string& path);
void save_mask(const CartesianGrid2D& grid, const std::string& path);

// Nodal values on a grid, identically zero on and outside the mask
// boundary (homogeneous Dirichlet via zero extension).
struct GridFunction {
    std::shared_ptr<const CartesianGrid2D> grid;
    std::vector<double> values;

    explicit GridFunction(std::shared_ptr<const CartesianGrid2D> g);
    double& at(int i, int j) { return values[grid->index(i, j)]; }
    double at(int i, int j) const { return values[grid->index(i, j)]; }
    void conform();              // zero every off-mask entry
    double integral() const;     // h^2 * sum over mask
    double l2_norm_sq() const;   // h^2 * sum of squares
};

// CSV rows "i,j,x,y,u" over the mask.
void write_csv(const GridFunction& u, const std::string& path);

// Discrete anisotropic Dirichlet energy: sum over cells of H(Delta)^2
// with forward differences Delta = (u_E - u_P, u_N - u_P) into the zero
// extension (equals the h^2-weighted continuum sum by 1-homogeneity).
double dirichlet_energy(const GridFunction& u, const Gauge& g);

// (dirichlet_energy + alpha * (integral u)^2) / (h^2 sum u^2)
double rayleigh_quotient(const GridFunction& u, const Gauge& g, double alpha);

struct MinimizeOptions {
    double grad_tol = 1e-7;       // descent path: projected-gradient M-norm
    double eig_tol = 1e-7;        // matrix path: relative eigenproblem residual
    int max_iterations = 40000;   // descent path cap
    std::uint64_t seed = 0;       // random-restart seed
    bool force_descent = false;   // route quadratic gauges through descent
};

struct MinimizeResult {
    double lambda = 0;
    GridFunction u;
    bool converged = false;
    int iterations = 0;
    double projected_gradient_norm = 0;  // descent path diagnostic
};

// Smallest value of the Rayleigh quotient over the mask. Euclidean and
// ellipse gauges (and p = 2) go through the exact quadratic eigenproblem
// (CG-based inverse iteration, rank-one handled by Sherman-Morrison);
// other gauges minimize the energy over the discrete unit L^2 sphere by
// projected Barzilai-Borwein descent from a deterministic positive bump
// plus one seeded random restart.
MinimizeResult minimize_rayleigh(const CartesianGrid2D& grid, const Gauge& g, double alpha,
                                 const MinimizeOptions& opts = {});

}  // namespace wulff::variational
