#pragma once

namespace wulff::bessel {

// Bessel function of the first kind J_nu(x) for real order nu >= 0, x >= 0.
// Power series below the crossover, Miller backward recurrence with the
// Neumann-series normalization above it; both run in long double, so the
// returned double is accurate to ~1e-14 relative to the oscillation
// envelope for x <= 60. Throws std::invalid_argument for nu < 0 or x < 0.
double j(double nu, double x);

// First positive zero j_{nu,1}: sign scan on (nu, nu+10] followed by
// bisection and a secant polish, absolute accuracy better than 1e-12.
double j_first_zero(double nu);

// k-th positive zero (k >= 1), by continued sign scan from the previous
// zero. Results are memoized behind a mutex; cached and uncached calls
// return identical values.
double j_zero(double nu, int k);

struct Ratio {
    double value;
    bool at_pole;  // |J_den(x)| < 1e-13: denominator at a zero, value unusable
};

// J_num(x) / J_den(x) with pole proximity signaled instead of thrown.
Ratio j_ratio(double num_nu, double den_nu, double x);

}  // namespace wulff::bessel
