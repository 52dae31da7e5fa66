#pragma once

// Geometry of the three constant-curvature model surfaces.
//
//   K = +1  unit sphere in R^3, restricted to the open upper hemisphere z > 0
//   K = -1  upper sheet of the hyperboloid x^2 + y^2 - z^2 = -1 in Minkowski space
//   K =  0  the plane z = 0
//
// Points are stored in embedding coordinates. Tangent vectors at p are
// orthogonal to p in the model inner product (Euclidean for K = +1,
// Minkowski (+,+,-) for K = -1); for K = 0 they have zero third coordinate.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <utility>

namespace curvbill {

using Vec3 = Eigen::Vector3d;

enum class Curvature : int { Hyperbolic = -1, Flat = 0, Sphere = 1 };

/// Throws ValidationError unless k is -1, 0 or +1.
Curvature curvature_from_int(int k);

constexpr int sign(Curvature k) noexcept { return static_cast<int>(k); }

const char* to_string(Curvature k) noexcept;

/// Raw model arithmetic on embedding coordinates. No validation; these sit on
/// the hot path of every chord evaluation.
namespace model {

inline double inner(Curvature k, const Vec3& a, const Vec3& b) noexcept {
    if (k == Curvature::Hyperbolic) return a.x() * b.x() + a.y() * b.y() - a.z() * b.z();
    return a.dot(b);
}

inline double norm(Curvature k, const Vec3& v) noexcept {
    const double n2 = inner(k, v, v);
    return n2 > 0.0 ? std::sqrt(n2) : 0.0;
}

/// Geodesic distance. Uses forms that stay accurate for nearby points.
double distance(Curvature k, const Vec3& p, const Vec3& q) noexcept;

/// Unit initial direction at p of the geodesic towards q (q != p).
Vec3 direction(Curvature k, const Vec3& p, const Vec3& q) noexcept;

/// Point at arc length t along the geodesic from p with unit velocity v.
Vec3 exp(Curvature k, const Vec3& p, const Vec3& v, double t) noexcept;

/// Projects v onto the tangent plane at p.
Vec3 project_tangent(Curvature k, const Vec3& p, const Vec3& v) noexcept;

/// Pulls an approximately-on-model vector back onto the model surface.
Vec3 renormalize(Curvature k, const Vec3& v) noexcept;

}  // namespace model

class SurfacePoint {
public:
    /// Validates the model constraint to 1e-10 (scaled by |v|^2) and the
    /// sheet/hemisphere condition, then renormalizes onto the model.
    SurfacePoint(const Vec3& coords, Curvature tag);

    /// Base point of geodesic polar coordinates: (0,0,1) for K = +-1, origin for K = 0.
    static SurfacePoint origin(Curvature tag);

    /// Point at geodesic distance rho from origin(tag), in direction angle theta.
    static SurfacePoint from_polar(Curvature tag, double rho, double theta);

    const Vec3& coords() const noexcept { return coords_; }
    Curvature tag() const noexcept { return tag_; }

    /// Residual of the defining equation of the model (0 for exact points).
    double model_residual() const noexcept;

private:
    Vec3 coords_;
    Curvature tag_;
};

class TangentVector {
public:
    /// Throws ValidationError if dir is not tangent at base (tolerance 1e-10).
    TangentVector(SurfacePoint base, const Vec3& dir);

    const SurfacePoint& base() const noexcept { return base_; }
    const Vec3& dir() const noexcept { return dir_; }
    double norm() const noexcept { return model::norm(base_.tag(), dir_); }
    bool is_unit(double tol = 1e-12) const noexcept { return std::abs(norm() - 1.0) <= tol; }
    TangentVector normalized() const;

private:
    SurfacePoint base_;
    Vec3 dir_;
};

struct JacobiScalar {
    double t;
    double Y;
    double Yprime;
};

/// Distance between points on the same model. Throws ValidationError on mixed
/// tags or when the inner product leaves the arccos/arccosh domain by more
/// than 1e-10.
double geodesic_distance(const SurfacePoint& p, const SurfacePoint& q);

/// Requires v unit (to 1e-10) and, on the sphere, t < pi.
SurfacePoint exp_map(const TangentVector& v, double t);

/// Unit tangent at p towards q. Throws ValidationError for coincident points.
TangentVector log_map(const SurfacePoint& p, const SurfacePoint& q);

/// Angle in [0, pi] between tangent vectors at the same base point.
double angle_between(const TangentVector& u, const TangentVector& w);

/// Normalized Jacobi field: Y'' + K Y = 0, Y(0) = 0, Y'(0) = 1.
JacobiScalar jacobi_Y(double t, Curvature tag) noexcept;

/// Y'(t) / Y(t): cot t, 1/t or coth t.
double jacobi_log_derivative(double t, Curvature tag) noexcept;

/// Positively oriented orthonormal frame (e1, e2) of the tangent plane at p.
/// At origin(tag) it is ((1,0,0), (0,1,0)).
std::pair<Vec3, Vec3> tangent_frame(const SurfacePoint& p);

}  // namespace curvbill
