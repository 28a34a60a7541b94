#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wulff/closedform.hpp"

namespace wulff::saturation {

// Mass split of the pair: the smaller set carries the fraction s of the
// total volume, s in [0, 1/2]; s = 0 is a single Wulff set, s = 1/2 the
// equal pair.
struct ShapeSplit {
    double s = 0;
};

closedform::WulffPair pair_from_split(int n, double kappa, double V, double s);

// Right-hand side of the saturation theorem:
//   alpha * V^{1+2/n} <= alpha_c : lambda(alpha, single Wulff set of volume V)
//   alpha * V^{1+2/n} >= alpha_c : the constant saturated level.
double theorem_bound(int n, double kappa, double V, double alpha);

// Minimum of lambda(alpha, .) over equal-volume Wulff pairs: dense scan
// over 64 splits plus golden-section refinement around the best seed.
std::pair<ShapeSplit, double> min_over_pairs(int n, double kappa, double V, double alpha);

struct CurveSample {
    double alpha = 0;
    double lambda_min = 0;
    double s_opt = 0;
    closedform::Regime regime = closedform::Regime::local;
    bool ok = true;
    std::string error;
};

struct SaturationCurve {
    int n = 2;
    double kappa = 0;
    double volume = 0;
    double critical_alpha_scaled = 0;  // alpha_c / V^{1+2/n}
    std::vector<CurveSample> samples;
};

// One min_over_pairs evaluation per alpha (alphas ascending). Per-point
// solver failures are recorded in the sample and skipped; the assembled
// curve is checked for monotonicity and for plateau constancy past the
// critical weight before returning.
SaturationCurve saturation_curve(int n, double kappa, double V, std::vector<double> alphas);

}  // namespace wulff::saturation
