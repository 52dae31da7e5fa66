#include "curvbill/billiard.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace curvbill {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxIterations = 200;
constexpr int kNonContractingLimit = 3;

// Angle data of the chord from fx to a candidate endpoint at theta_y.
struct Probe {
    CurveFrame fy;
    double L;
    double cos_phi;
    double sin_phi;
    double sin_psi;
    double phi;
};

Probe probe(const BoundaryCurve& curve, const CurveFrame& fx, double theta_y) {
    const Curvature k = curve.tag();
    Probe p;
    p.fy = curve.frame_at_theta(theta_y);
    p.L = model::distance(k, fx.point, p.fy.point);
    const Vec3 out = model::direction(k, fx.point, p.fy.point);
    const Vec3 back = model::direction(k, p.fy.point, fx.point);
    p.cos_phi = model::inner(k, out, fx.tangent);
    p.sin_phi = model::inner(k, out, fx.normal);
    p.sin_psi = model::inner(k, back, p.fy.normal);
    p.phi = std::atan2(p.sin_phi, p.cos_phi);
    return p;
}

ChordData assemble(const BoundaryCurve& curve, const CurveFrame& fx, const CurveFrame& fy,
                   double theta_x, double theta_y) {
    const Curvature k = curve.tag();
    ChordData c;
    c.theta_x = theta_x;
    c.theta_y = theta_y;
    c.x = curve.wrap(curve.arc_length_at(theta_x));
    c.y = curve.wrap(curve.arc_length_at(theta_y));
    c.L = model::distance(k, fx.point, fy.point);
    if (!(c.L > 0.0)) throw ValidationError("chord: endpoints coincide");
    if (k == Curvature::Sphere && c.L >= std::numbers::pi)
        throw NumericalError("chord: spherical chord length reaches pi");

    const Vec3 out = model::direction(k, fx.point, fy.point);
    const Vec3 back = model::direction(k, fy.point, fx.point);
    c.cos_phi = model::inner(k, out, fx.tangent);
    c.sin_phi = model::inner(k, out, fx.normal);
    c.cos_psi = -model::inner(k, back, fy.tangent);
    c.sin_psi = model::inner(k, back, fy.normal);
    c.phi = std::atan2(c.sin_phi, c.cos_phi);
    c.psi = std::atan2(c.sin_psi, c.cos_psi);

    const JacobiScalar y = jacobi_Y(c.L, k);
    const double ratio = y.Yprime / y.Y;
    c.L11 = ratio * c.sin_phi * c.sin_phi - fx.k * c.sin_phi;
    c.L22 = ratio * c.sin_psi * c.sin_psi - fy.k * c.sin_psi;
    c.L12 = c.sin_phi * c.sin_psi / y.Y;
    if (!(c.L12 > 0.0)) {
        std::ostringstream msg;
        msg << "chord: twist condition L12 > 0 violated (L12 = " << c.L12 << ")";
        throw NumericalError(msg.str());
    }
    return c;
}

}  // namespace

ChordData chord_theta(const BoundaryCurve& curve, double theta_x, double theta_y) {
    return assemble(curve, curve.frame_at_theta(theta_x), curve.frame_at_theta(theta_y), theta_x, theta_y);
}

ChordData chord(const BoundaryCurve& curve, double x, double y) {
    const double xw = curve.wrap(x);
    const double yw = curve.wrap(y);
    const double gap = std::abs(std::remainder(xw - yw, curve.perimeter()));
    if (gap <= 1e-12 * curve.perimeter()) throw ValidationError("chord: x and y coincide modulo the perimeter");
    const double tx = curve.theta_at(xw);
    double ty = curve.theta_at(yw);
    if (ty <= tx) ty += kTwoPi;
    return chord_theta(curve, tx, ty);
}

ShotResult shoot(const BoundaryCurve& curve, double theta_x, double phi) {
    if (!(phi > 0.0 && phi < std::numbers::pi)) throw ValidationError("shoot: angle must lie in (0, pi)");
    const CurveFrame fx = curve.frame_at_theta(theta_x);

    // g(t) = phi(theta_x, theta_x + t) - phi increases from -phi at t = 0+ to
    // pi - phi at t = 2 pi-; the endpoints themselves are never evaluated.
    double lo = 0.0;
    double hi = kTwoPi;
    double t = std::clamp(2.0 * phi, 1e-3, kTwoPi - 1e-3);
    double prev_abs = std::numeric_limits<double>::infinity();
    int non_contracting = 0;
    bool bisect_only = false;

    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        const Probe p = probe(curve, fx, theta_x + t);
        const double g = p.phi - phi;
        if (g < 0.0) lo = t; else hi = t;

        const JacobiScalar y = jacobi_Y(p.L, curve.tag());
        const double l12 = p.sin_phi * p.sin_psi / y.Y;
        if (!(l12 > 0.0)) throw NumericalError("shoot: twist condition violated inside the bracket");

        if (std::abs(g) <= 1e-15 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * kTwoPi) {
            ChordData c = assemble(curve, fx, p.fy, theta_x, theta_x + t);
            return {c, iter};
        }

        if (std::abs(g) > 0.5 * prev_abs && ++non_contracting >= kNonContractingLimit) bisect_only = true;
        prev_abs = std::abs(g);

        double next = 0.5 * (lo + hi);
        if (!bisect_only) {
            const double slope = l12 * p.fy.speed / p.sin_phi;  // d phi / d theta_y
            const double newton = t - g / slope;
            if (newton > lo && newton < hi) next = newton;
        }
        t = next;
    }
    throw NumericalError("shoot: no convergence within 200 iterations");
}

PhasePoint billiard_step(const BoundaryCurve& curve, PhasePoint p) {
    if (!(std::abs(p.Phi) < 1.0 - kGrazingEps)) throw GrazingError("billiard_step: grazing phase point", 0);
    const double theta_x = curve.theta_at(curve.wrap(p.x));
    const ChordData c = shoot(curve, theta_x, std::acos(p.Phi)).chord;
    if (std::abs(c.cos_phi - p.Phi) > 1e-12) {
        std::ostringstream msg;
        msg << "billiard_step: angle residual " << std::abs(c.cos_phi - p.Phi) << " above 1e-12";
        throw NumericalError(msg.str());
    }
    return {c.y, c.cos_psi};
}

Configuration orbit(const BoundaryCurve& curve, PhasePoint p, int n) {
    if (n < 0) throw ValidationError("orbit: negative bounce count");
    Configuration config;
    config.points.reserve(static_cast<std::size_t>(n) + 1);
    config.chords.reserve(static_cast<std::size_t>(n));
    p.x = curve.wrap(p.x);
    config.points.push_back(p);
    double theta = curve.theta_at(p.x);
    for (int i = 0; i < n; ++i) {
        const PhasePoint cur = config.points.back();
        if (!(std::abs(cur.Phi) < 1.0 - kGrazingEps)) {
            std::ostringstream msg;
            msg << "orbit: grazing phase point at step " << i;
            throw GrazingError(msg.str(), i);
        }
        const ChordData c = shoot(curve, theta, std::acos(cur.Phi)).chord;
        if (std::abs(c.cos_phi - cur.Phi) > 1e-12)
            throw NumericalError("orbit: angle residual above 1e-12");
        config.chords.push_back(c);
        config.points.push_back({c.y, c.cos_psi});
        theta = std::fmod(c.theta_y, kTwoPi);
    }
    return config;
}

double boundary_advance(const BoundaryCurve& curve, const ChordData& c) {
    return curve.arc_length_at(c.theta_y) - curve.arc_length_at(c.theta_x);
}

double reflection_law_residual(const Configuration& config) {
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < config.chords.size(); ++n)
        worst = std::max(worst, std::abs(config.chords[n].psi - config.chords[n + 1].phi));
    return worst;
}

double euler_lagrange_residual(const Configuration& config) {
    double worst = 0.0;
    for (std::size_t n = 0; n + 1 < config.chords.size(); ++n)
        worst = std::max(worst, std::abs(config.chords[n].cos_psi - config.chords[n + 1].cos_phi));
    return worst;
}

}  // namespace curvbill
