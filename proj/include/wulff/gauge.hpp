#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wulff {

// Volume of the Euclidean unit ball in R^n.
double unit_ball_volume(int n);

enum class GaugeKind { euclidean, p_norm, ellipse };

std::string to_string(GaugeKind k);

// Geometry of the unit Wulff set W = {H° < 1}.
struct PolarData {
    double kappa_n = 0;   // |W|
    double gamma_n = 0;   // n * kappa_n, generalized perimeter of W
    GaugeKind kind = GaugeKind::euclidean;
    double conjugate_p = 0;                       // q with 1/p + 1/q = 1 (p-norm kind)
    std::array<double, 4> inverse_matrix{1, 0, 0, 1};  // A^{-1}, row-major (ellipse kind)
};

// An anisotropic norm H: 1-homogeneous, convex, C^1 away from 0, with
// strictly convex level sets. Instances are normalized at construction so
// that |{H < 1}| equals the Euclidean unit-ball volume. Immutable; every
// member function is const and safe for concurrent use.
class Gauge {
public:
    static Gauge euclidean(int n);
    static Gauge p_norm(int n, double p);                     // 1 < p < inf
    static Gauge ellipse(double a11, double a12, double a22); // n = 2, A SPD

    // "euclidean" | "p:<float>" | "ellipse:<a11>,<a12>,<a22>", case-insensitive.
    static Gauge parse(std::string_view spec, int n);

    int dim() const { return n_; }
    GaugeKind kind() const { return kind_; }
    double p() const { return p_; }
    double scale() const { return scale_; }
    // (betabs) constants: bound_low*|x| <= H(x) <= bound_high*|x|, tight.
    double bound_low() const { return bound_low_; }
    double bound_high() const { return bound_high_; }

    double value(std::span<const double> x) const;                 // H(x)
    std::vector<double> gradient(std::span<const double> x) const; // x != 0
    double polar_value(std::span<const double> x) const;           // H°(x)
    std::vector<double> polar_gradient(std::span<const double> x) const;

    // allocation-free 2-D variants for grid inner loops (dim() == 2)
    double value2(double x, double y) const;
    void gradient2(double x, double y, double& gx, double& gy) const;
    double polar_value2(double x, double y) const;

    PolarData wulff_measure() const;

    // Residuals of the four gauge/polar identities:
    //   |H(∇H°(x)) − 1|, |H°(∇H(x)) − 1|,
    //   ‖H°(x)∇H(∇H°(x)) − x‖, ‖H(x)∇H°(∇H(x)) − x‖.
    std::array<double, 4> identity_residuals(std::span<const double> x) const;

private:
    Gauge() = default;
    void check_dim(std::span<const double> x) const;

    int n_ = 2;
    GaugeKind kind_ = GaugeKind::euclidean;
    double p_ = 2.0;
    std::array<double, 4> mat_{1, 0, 0, 1};      // A (ellipse)
    std::array<double, 4> inv_mat_{1, 0, 0, 1};  // A^{-1}
    double scale_ = 1.0;
    double bound_low_ = 1.0;
    double bound_high_ = 1.0;
};

// |{H < 1}| by adaptive angular quadrature (n = 2 only), relative
// tolerance ~1e-9. Verification path for the normalization invariant.
double measure_by_quadrature(const Gauge& g);

// |{H° < 1}| by the same quadrature applied to the polar (n = 2 only).
double polar_measure_by_quadrature(const Gauge& g);

}  // namespace wulff
