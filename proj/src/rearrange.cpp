#include "wulff/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wulff::variational {

double DecreasingRearrangement::mu(double t) const {
    // heights sorted descending: count of entries > t
    const auto it = std::upper_bound(heights.begin(), heights.end(), t,
                                     [](double a, double b) { return a > b; });
    return static_cast<double>(it - heights.begin()) * cell_measure;
}

double DecreasingRearrangement::u_star(double s) const {
    if (s < 0) throw std::invalid_argument("u_star: s must be >= 0");
    const size_t k = static_cast<size_t>(std::floor(s / cell_measure));
    return k < heights.size() ? heights[k] : 0.0;
}

DecreasingRearrangement decreasing_rearrangement(const GridFunction& u) {
    const auto& g = *u.grid;
    DecreasingRearrangement d;
    d.cell_measure = g.h * g.h;
    d.heights.reserve(g.count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.inside(i, j)) d.heights.push_back(std::fabs(u.at(i, j)));
    std::stable_sort(d.heights.begin(), d.heights.end(), std::greater<double>());
    d.total_measure = d.heights.size() * d.cell_measure;
    return d;
}

GridFunction convex_rearrangement(const GridFunction& u, const Gauge& g,
                                  const CartesianGrid2D& target) {
    if (g.dim() != 2) throw std::invalid_argument("convex_rearrangement: gauge must be 2-D");
    const double measure_u = u.grid->area();
    const double measure_t = target.h * target.h * target.count();
    const double slack = 2.0 * u.grid->h * u.grid->perimeter_estimate();
    if (std::fabs(measure_u - measure_t) > slack)
        throw std::invalid_argument("convex_rearrangement: target measure mismatch");

    const auto d = decreasing_rearrangement(u);
    const double kappa = g.wulff_measure().kappa_n;
    GridFunction out(std::make_shared<CartesianGrid2D>(target));
    for (int j = 0; j < target.ny; ++j)
        for (int i = 0; i < target.nx; ++i) {
            if (!target.inside(i, j)) continue;
            const double rho = g.polar_value2(target.x(i), target.y(j));
            out.at(i, j) = d.u_star(kappa * rho * rho);
        }
    return out;
}

std::pair<double, double> polya_szego_gap(const GridFunction& u, const Gauge& g) {
    const double lhs = dirichlet_energy(u, g);
    const auto target = make_wulff_grid(g, u.grid->area(), u.grid->h);
    const auto sharp = convex_rearrangement(u, g, target);
    return {lhs, dirichlet_energy(sharp, g)};
}

}  // namespace wulff::variational
