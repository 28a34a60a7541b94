#pragma once

#include <utility>
#include <vector>

#include "wulff/gauge.hpp"
#include "wulff/grid2d.hpp"

namespace wulff::variational {

// Decreasing rearrangement of |u| over the mask cells: step heights in
// nonincreasing order, each carrying measure h^2. Equal values keep the
// lexicographic (j, i) cell order, so the result is deterministic.
struct DecreasingRearrangement {
    std::vector<double> heights;  // |u| sorted descending
    double cell_measure = 0;      // h^2
    double total_measure = 0;     // heights.size() * h^2

    // distribution function mu(t) = |{ |u| > t }|
    double mu(double t) const;
    // right-continuous generalized inverse on [0, total_measure); 0 beyond
    double u_star(double s) const;
};

DecreasingRearrangement decreasing_rearrangement(const GridFunction& u);

// Convex rearrangement u^#(x) = u*(kappa * H°(x)^n) sampled on a target
// grid that masks the centered Wulff set of the same measure as u's mask.
// Throws if the target measure differs from u's by more than
// 2h * perimeter estimate.
GridFunction convex_rearrangement(const GridFunction& u, const Gauge& g,
                                  const CartesianGrid2D& target);

// (lhs, rhs) of the rearrangement energy comparison: the anisotropic
// Dirichlet energy of u and of its convex rearrangement on an auto-built
// equal-measure Wulff grid. Returned as a pair so callers can assert with
// an explicit discretization slack.
std::pair<double, double> polya_szego_gap(const GridFunction& u, const Gauge& g);

}  // namespace wulff::variational
