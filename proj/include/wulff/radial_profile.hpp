#pragma once

#include <vector>

namespace wulff {

// Radial function sampled at explicit nodes rho[i] in [0, R].
struct RadialProfile {
    double R = 0;
    std::vector<double> rho;
    std::vector<double> values;
};

}  // namespace wulff
