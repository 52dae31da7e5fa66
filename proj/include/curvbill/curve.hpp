#pragma once

// Strictly convex closed curves given in geodesic polar coordinates about a
// center point: rho(theta) = c0 + sum_m (a_m cos m theta + b_m sin m theta).
//
// Everything that depends on theta (position, tangent, geodesic curvature,
// speed) is evaluated in closed form from the trigonometric series, so it is
// exact up to rounding at any theta. Arc length s(theta) is the integral of
// the Fourier series of the speed; theta(x) inverts it.

#include "curvbill/surface.hpp"

#include <functional>
#include <vector>

namespace curvbill {

struct Harmonic {
    int m;
    double a;
    double b;
};

struct RadialValue {
    double rho;
    double d1;  // d rho / d theta
    double d2;  // d^2 rho / d theta^2
};

struct CurveSpec {
    Curvature tag;
    SurfacePoint center;
    double c0;
    std::vector<Harmonic> harmonics;

    /// Geodesic circle of radius r about origin(tag).
    static CurveSpec circle(Curvature tag, double r);

    RadialValue radial(double theta) const noexcept;

    /// Throws ValidationError on c0 <= 0, m < 1, repeated m or non-finite values.
    void validate() const;
};

/// Geometric data at one point of the curve. `normal` is the unit inward
/// normal in the tangent plane of the surface.
struct CurveFrame {
    Vec3 point;
    Vec3 tangent;
    Vec3 normal;
    double k;
    double speed;  // |d gamma / d theta|
};

struct CurveSample {
    double theta;
    double s;
    Vec3 point;
    Vec3 tangent;
    double k;
    double speed;
};

class BoundaryCurve {
public:
    static constexpr int kDefaultResolution = 2048;
    static constexpr double kMargin = 1e-3;

    const CurveSpec& spec() const noexcept { return spec_; }
    Curvature tag() const noexcept { return spec_.tag; }
    int resolution() const noexcept { return static_cast<int>(samples_.size()) - 1; }
    double perimeter() const noexcept { return perimeter_; }
    double area() const noexcept { return area_; }
    double min_curvature() const noexcept { return min_k_; }
    double max_curvature() const noexcept { return max_k_; }

    /// resolution() + 1 samples on the uniform theta grid; the last repeats the first at 2 pi.
    const std::vector<CurveSample>& samples() const noexcept { return samples_; }

    /// Lifted arc length: s(theta + 2 pi) = s(theta) + P, s(0) = 0.
    double arc_length_at(double theta) const noexcept;

    /// Lifted inverse of arc_length_at, for any real x.
    double theta_at(double x) const noexcept;

    CurveFrame frame_at_theta(double theta) const noexcept;
    CurveFrame frame_at(double x) const noexcept { return frame_at_theta(theta_at(x)); }

    SurfacePoint position_at(double x) const;
    TangentVector tangent_at(double x) const;

    /// Periodic trapezoid rule for the integral of f over arc length, with f
    /// evaluated on the sample table.
    double integrate(const std::function<double(const CurveSample&)>& f) const;

    /// Wraps x into [0, P).
    double wrap(double x) const noexcept;

private:
    friend BoundaryCurve build_curve(const CurveSpec& spec, int resolution);
    explicit BoundaryCurve(CurveSpec spec) : spec_(std::move(spec)) {}

    CurveSpec spec_;
    Vec3 e1_, e2_;
    std::vector<CurveSample> samples_;
    // speed(theta) ~ speed_mean_ + sum_m (speed_cos_[m] cos m theta + speed_sin_[m] sin m theta)
    double speed_mean_ = 0.0;
    std::vector<double> speed_cos_, speed_sin_;
    // monotone cubic interpolant data for theta(s) on [0, P]
    std::vector<double> seed_slope_;
    double perimeter_ = 0.0;
    double area_ = 0.0;
    double min_k_ = 0.0;
    double max_k_ = 0.0;
};

/// Samples the curve, builds the arc-length tables and checks admissibility:
/// rho > 0, sphere curves inside the hemisphere with margin 1e-3, k >= 1e-3
/// everywhere and closure of the sample table.
BoundaryCurve build_curve(const CurveSpec& spec, int resolution = BoundaryCurve::kDefaultResolution);

double geodesic_curvature(const BoundaryCurve& curve, double x);

double enclosed_area(const BoundaryCurve& curve);

/// integral of k ds + K A - 2 pi; zero up to quadrature error.
double gauss_bonnet_residual(const BoundaryCurve& curve);

}  // namespace curvbill
