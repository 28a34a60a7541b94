#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "wulff/radial_profile.hpp"

namespace wulff::closedform {

// Union of two disjoint Wulff sets of radii r1 <= r2 (r1 may be 0), in
// dimension n, for a gauge whose unit Wulff set has measure kappa.
struct WulffPair {
    int n;
    double r1, r2;
    double kappa;

    WulffPair(int n_, double r1_, double r2_, double kappa_);
    double volume() const;  // kappa * (r1^n + r2^n)
};

enum class Regime { local, twisted_large_ball, twisted_theta, nonlocal, saturated };
std::string to_string(Regime r);

struct EigenResult {
    double lambda = 0;
    Regime regime = Regime::local;
    std::optional<double> c1, c2;  // component amplitudes of the radial eigenfunction
    std::optional<double> c;       // constant right-hand side of the radial ODE
    bool zero_average = false;
};

struct PoleEncountered : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EtaOutOfRange : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kappa^{2/n} j^2_{n/2-1,1} / V^{2/n}: the optimal level at alpha = 0.
double faber_krahn_level(int n, double kappa, double volume);
// 2^{2/n} * faber_krahn_level: the optimal level past the critical weight.
double saturation_level(int n, double kappa, double volume);

// First Dirichlet eigenvalue of a single Wulff set: (j_{n/2-1,1} / R)^2.
EigenResult local_wulff_eigenvalue(int n, double kappa, double R);

// theta* = 2^{1/n} j_{n/2-1,1}, the universal lower bound for theta_root
// under the normalization r1^n + r2^n = 1.
double theta_star(int n);

// First positive root of
//   r1^n J_{n/2+1}(t r1)/J_{n/2-1}(t r1) + r2^n J_{n/2+1}(t r2)/J_{n/2-1}(t r2) = 0,
// located between the first pole j_{n/2-1,1}/r2 and the next singularity.
// Inputs are rescaled internally so r1^n + r2^n = 1 and the root is mapped
// back. Requires 0 < r1 <= r2; equal (and nearly equal) radii return the
// analytic limit theta*/sigma.
double theta_root(int n, double r1, double r2);

// c_n: the radius ratio at which the two twisted regimes exchange,
// i.e. theta(r1,r2) * r2 = j_{n/2,1} under the volume normalization. Cached.
double threshold_ratio(int n);

// First twisted (zero-average) eigenvalue of the pair:
//   r1/r2 <  c_n: (j_{n/2,1}/r2)^2   [mode concentrated on the larger set]
//   r1/r2 >= c_n: theta_root(r1,r2)^2
EigenResult twisted_pair_eigenvalue(int n, double r1, double r2);

enum class EtaMode { certified, extended };

// The unique weight alpha for which eta is the first eigenvalue of the
// pair:
//   1/alpha = kappa(r1^n+r2^n)/eta
//           - (n kappa / eta^{3/2}) * sum_i r_i^{n-1} J_{n/2}(sqrt(eta) r_i)/J_{n/2-1}(sqrt(eta) r_i).
// In certified mode eta must lie in the open interval
// (faber_krahn_level, saturation_level); extended mode admits any eta in
// (0, theta_root^2) and is cross-checked against the variational solver
// in tests rather than guaranteed by the closed form.
double alpha_for_eta(const WulffPair& pair, double eta, EtaMode mode = EtaMode::certified);

// First eigenvalue of the pair at weight alpha. Equal radii with
// alpha >= 0 saturate at saturation_level; alpha = 0 is the local
// eigenvalue of the larger set; otherwise the alpha_for_eta relation is
// inverted by bracketed bisection in eta.
EigenResult nonlocal_pair_eigenvalue(const WulffPair& pair, double alpha);

// The critical weight of the saturation theorem:
//   alpha_c = 2^{3/n} kappa^{2/n} j^3 J_{n/2-1}(2^{1/n} j)
//             / (2^{1/n} j J_{n/2-1}(2^{1/n} j) - n J_{n/2}(2^{1/n} j)),
// with j = j_{n/2-1,1}. Independent of the domain measure: the transition
// condition is alpha |Omega|^{1+2/n} vs alpha_c.
double critical_alpha(int n, double kappa);

// Independent route to alpha_c: alpha_for_eta at the saturated level with
// the second radius r2 -> 0 at unit volume, Richardson-extrapolated in
// r2^n. Used by tests and the CLI to cross-check the displayed formula.
double critical_alpha_limit_oracle(int n, double kappa, double r2_start = 1e-3);

// Samples u(rho) = amplitude * (rho^{1-n/2} J_{n/2-1}(sqrt(lambda) rho)
//                               - R^{1-n/2} J_{n/2-1}(sqrt(lambda) R))
// on a uniform grid over [0, R]; the rho -> 0 limit is taken by series.
RadialProfile radial_eigenfunction_profile(int n, double R, double lambda, double amplitude,
                                           int grid_points);

// Scaling law lambda(alpha, t*Omega) = t^{-2} lambda(t^{n+2} alpha, Omega):
// given lambda evaluated at the rescaled weight on Omega, returns the
// eigenvalue on t*Omega. alpha and n are accepted for call-site clarity.
double rescale(int n, double t, double alpha, double lambda_of_rescaled_weight);
// t^{n+2} * alpha, the weight that pairs with rescale().
double rescaled_weight(int n, double t, double alpha);

// Amplitudes (c1, c2) of the two-component twisted eigenfunction and the
// shared ODE constant c at eigenvalue lambda = theta^2.
struct TwistedCoefficients {
    double c1, c2;
    double c_from_u1, c_from_u2;  // agree at the theta root
};
TwistedCoefficients twisted_coefficients(int n, double r1, double r2, double lambda);

}  // namespace wulff::closedform
