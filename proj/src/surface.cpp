#include "curvbill/surface.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace curvbill {

namespace {

constexpr double kModelTol = 1e-10;

double raw_residual(Curvature k, const Vec3& v) noexcept {
    switch (k) {
        case Curvature::Sphere: return v.squaredNorm() - 1.0;
        case Curvature::Hyperbolic: return model::inner(k, v, v) + 1.0;
        case Curvature::Flat: return v.z();
    }
    return 0.0;
}

// Minkowski cross product: orthogonal to a and b in the (+,+,-) form.
Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    Vec3 c = a.cross(b);
    c.z() = -c.z();
    return c;
}

}  // namespace

Curvature curvature_from_int(int k) {
    switch (k) {
        case -1: return Curvature::Hyperbolic;
        case 0: return Curvature::Flat;
        case 1: return Curvature::Sphere;
        default: throw ValidationError("curvature K must be -1, 0 or +1, got " + std::to_string(k));
    }
}

const char* to_string(Curvature k) noexcept {
    switch (k) {
        case Curvature::Hyperbolic: return "hyperbolic";
        case Curvature::Flat: return "euclidean";
        case Curvature::Sphere: return "sphere";
    }
    return "?";
}

namespace model {

double distance(Curvature k, const Vec3& p, const Vec3& q) noexcept {
    switch (k) {
        case Curvature::Sphere:
            return std::atan2(p.cross(q).norm(), p.dot(q));
        case Curvature::Hyperbolic: {
            const Vec3 d = p - q;
            const double chord2 = std::max(0.0, inner(k, d, d));
            return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
        }
        case Curvature::Flat:
            return (p - q).norm();
    }
    return 0.0;
}

Vec3 project_tangent(Curvature k, const Vec3& p, const Vec3& v) noexcept {
    switch (k) {
        case Curvature::Sphere: return v - p.dot(v) * p;
        case Curvature::Hyperbolic: return v + inner(k, p, v) * p;
        case Curvature::Flat: return {v.x(), v.y(), 0.0};
    }
    return v;
}

Vec3 direction(Curvature k, const Vec3& p, const Vec3& q) noexcept {
    const Vec3 w = k == Curvature::Flat ? Vec3(q - p) : project_tangent(k, p, q);
    return w / norm(k, w);
}

Vec3 exp(Curvature k, const Vec3& p, const Vec3& v, double t) noexcept {
    switch (k) {
        case Curvature::Sphere: return std::cos(t) * p + std::sin(t) * v;
        case Curvature::Hyperbolic: return std::cosh(t) * p + std::sinh(t) * v;
        case Curvature::Flat: return p + t * v;
    }
    return p;
}

Vec3 renormalize(Curvature k, const Vec3& v) noexcept {
    switch (k) {
        case Curvature::Sphere: return v / v.norm();
        case Curvature::Hyperbolic: return v / std::sqrt(-inner(k, v, v));
        case Curvature::Flat: return {v.x(), v.y(), 0.0};
    }
    return v;
}

}  // namespace model

SurfacePoint::SurfacePoint(const Vec3& coords, Curvature tag) : tag_(tag) {
    if (!coords.allFinite()) throw ValidationError("surface point has non-finite coordinates");
    const double scale = std::max(1.0, coords.squaredNorm());
    if (std::abs(raw_residual(tag, coords)) > kModelTol * scale)
        throw ValidationError(std::string("point is not on the ") + to_string(tag) + " model");
    if (tag != Curvature::Flat && !(coords.z() > 0.0))
        throw ValidationError(tag == Curvature::Sphere ? "point outside the open upper hemisphere"
                                                       : "point not on the upper hyperboloid sheet");
    coords_ = model::renormalize(tag, coords);
}

SurfacePoint SurfacePoint::origin(Curvature tag) {
    return {tag == Curvature::Flat ? Vec3(0, 0, 0) : Vec3(0, 0, 1), tag};
}

SurfacePoint SurfacePoint::from_polar(Curvature tag, double rho, double theta) {
    const JacobiScalar y = jacobi_Y(rho, tag);
    const Vec3 u(std::cos(theta), std::sin(theta), 0.0);
    return {origin(tag).coords() * y.Yprime + y.Y * u, tag};
}

double SurfacePoint::model_residual() const noexcept { return raw_residual(tag_, coords_); }

TangentVector::TangentVector(SurfacePoint base, const Vec3& dir) : base_(std::move(base)), dir_(dir) {
    const Curvature k = base_.tag();
    const double off = k == Curvature::Flat ? dir.z() : model::inner(k, base_.coords(), dir);
    if (std::abs(off) > kModelTol * std::max(1.0, dir.norm() * base_.coords().norm()))
        throw ValidationError("vector is not tangent at its base point");
}

TangentVector TangentVector::normalized() const {
    const double n = norm();
    if (!(n > 0.0)) throw ValidationError("cannot normalize a null tangent vector");
    return {base_, dir_ / n};
}

double geodesic_distance(const SurfacePoint& p, const SurfacePoint& q) {
    const Curvature k = p.tag();
    if (q.tag() != k) throw ValidationError("geodesic_distance: mixed curvature tags");
    if (k == Curvature::Sphere) {
        const double c = p.coords().dot(q.coords());
        if (c > 1.0 + kModelTol || c < -1.0 - kModelTol)
            throw ValidationError("geodesic_distance: cosine outside [-1, 1]");
    } else if (k == Curvature::Hyperbolic) {
        const double c = -model::inner(k, p.coords(), q.coords());
        if (c < 1.0 - kModelTol) throw ValidationError("geodesic_distance: cosh argument below 1");
    }
    return model::distance(k, p.coords(), q.coords());
}

SurfacePoint exp_map(const TangentVector& v, double t) {
    if (std::abs(v.norm() - 1.0) > kModelTol) throw ValidationError("exp_map: tangent vector is not unit");
    if (t < 0.0) throw ValidationError("exp_map: negative arc length");
    const Curvature k = v.base().tag();
    if (k == Curvature::Sphere && t >= std::numbers::pi)
        throw ValidationError("exp_map: arc length beyond the injectivity radius");
    return {model::exp(k, v.base().coords(), v.dir(), t), k};
}

TangentVector log_map(const SurfacePoint& p, const SurfacePoint& q) {
    if (q.tag() != p.tag()) throw ValidationError("log_map: mixed curvature tags");
    const Curvature k = p.tag();
    if (model::distance(k, p.coords(), q.coords()) == 0.0)
        throw ValidationError("log_map: coincident points have no direction");
    return {p, model::direction(k, p.coords(), q.coords())};
}

double angle_between(const TangentVector& u, const TangentVector& w) {
    const Vec3& a = u.base().coords();
    const Vec3& b = w.base().coords();
    if (u.base().tag() != w.base().tag() || (a - b).norm() > 1e-12 * std::max(1.0, a.norm()))
        throw ValidationError("angle_between: vectors live at different base points");
    const Curvature k = u.base().tag();
    const double c = model::inner(k, u.dir(), w.dir()) / (u.norm() * w.norm());
    return std::acos(std::clamp(c, -1.0, 1.0));
}

JacobiScalar jacobi_Y(double t, Curvature tag) noexcept {
    switch (tag) {
        case Curvature::Sphere: return {t, std::sin(t), std::cos(t)};
        case Curvature::Hyperbolic: return {t, std::sinh(t), std::cosh(t)};
        case Curvature::Flat: return {t, t, 1.0};
    }
    return {t, t, 1.0};
}

double jacobi_log_derivative(double t, Curvature tag) noexcept {
    switch (tag) {
        case Curvature::Sphere: return 1.0 / std::tan(t);
        case Curvature::Hyperbolic: return 1.0 / std::tanh(t);
        case Curvature::Flat: return 1.0 / t;
    }
    return 1.0 / t;
}

std::pair<Vec3, Vec3> tangent_frame(const SurfacePoint& p) {
    const Curvature k = p.tag();
    const Vec3& c = p.coords();
    if (k == Curvature::Flat) return {Vec3(1, 0, 0), Vec3(0, 1, 0)};

    Vec3 e1 = model::project_tangent(k, c, Vec3(1, 0, 0));
    if (model::norm(k, e1) < 0.1) e1 = model::project_tangent(k, c, Vec3(0, 1, 0));
    e1 /= model::norm(k, e1);
    Vec3 e2 = k == Curvature::Sphere ? c.cross(e1) : lorentz_cross(c, e1);
    e2 = model::project_tangent(k, c, e2);
    e2 -= model::inner(k, e2, e1) * e1;
    e2 /= model::norm(k, e2);
    return {e1, e2};
}

}  // namespace curvbill
