#include "curvbill/mirror.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace curvbill {

namespace {

constexpr int kMaxBisections = 60;
constexpr double kRatioTolerance = 1e-12;

}  // namespace

CausticDistance solve_caustic_distance(double L, double phi0, double phi1, double nu1, Curvature tag) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("solve_caustic_distance: L must be positive");
    if (tag == Curvature::Sphere && L >= std::numbers::pi)
        throw ValidationError("solve_caustic_distance: L must be below pi on the sphere");
    if (!(phi0 > 0.0 && phi0 < std::numbers::pi) || !(phi1 > 0.0 && phi1 < std::numbers::pi))
        throw ValidationError("solve_caustic_distance: angles must lie in (0, pi)");
    if (!(nu1 > 0.0) || !std::isfinite(nu1)) throw ValidationError("solve_caustic_distance: nu1 must be positive");

    const double target = std::sin(phi0) / (nu1 * std::sin(phi1));
    if (!(target > 0.0) || !std::isfinite(target))
        throw ValidationError("solve_caustic_distance: target ratio is not a positive number");

    const double yL = jacobi_Y(L, tag).Y;
    double lo = 0.0;
    double hi = L;
    CausticDistance out{0.5 * L, L, 0, std::numeric_limits<double>::infinity(), true};
    for (int it = 1; it <= kMaxBisections; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double ym = jacobi_Y(L - mid, tag).Y;
        const double ratio = jacobi_Y(mid, tag).Y / ym;
        if (!(yL / (ym * ym) > 0.0)) out.certificate_ok = false;
        out.a = mid;
        out.iterations = it;
        out.residual = std::abs(ratio - target) / target;
        if (out.residual <= kRatioTolerance) break;
        if (ratio < target) lo = mid; else hi = mid;
    }
    return out;
}

std::vector<MirrorSample> mirror_residual(const BoundaryCurve& curve, const Configuration& orbit,
                                          const std::vector<std::optional<double>>& nu1) {
    const std::size_t n_chords = orbit.chords.size();
    if (nu1.size() < n_chords) throw ValidationError("mirror_residual: one cocycle value per chord required");
    const Curvature tag = curve.tag();

    std::vector<MirrorSample> out;
    out.reserve(n_chords);
    for (std::size_t n = 0; n < n_chords; ++n) {
        const ChordData& c = orbit.chords[n];
        MirrorSample s{static_cast<int>(n), std::numeric_limits<double>::quiet_NaN(), c.L, std::nullopt};
        if (nu1[n] && *nu1[n] > 0.0) s.a = solve_caustic_distance(c.L, c.phi, c.psi, *nu1[n], tag).a;
        out.push_back(s);
    }
    for (std::size_t n = 1; n < n_chords; ++n) {
        if (std::isnan(out[n].a) || std::isnan(out[n - 1].a)) continue;
        const ChordData& c = orbit.chords[n];
        const double k = curve.frame_at_theta(c.theta_x).k;
        const double lhs = jacobi_log_derivative(out[n].a, tag) +
                           jacobi_log_derivative(out[n - 1].L - out[n - 1].a, tag);
        out[n].residual = lhs - 2.0 * k / c.sin_phi;
    }
    return out;
}

std::pair<double, double> wronskian_identities_residual(double L, double a, Curvature tag) {
    const JacobiScalar yL = jacobi_Y(L, tag);
    const JacobiScalar ya = jacobi_Y(a, tag);
    const JacobiScalar yr = jacobi_Y(L - a, tag);
    // scaled by the size of the products so large hyperbolic arguments stay comparable
    const double s1 = std::max(1.0, std::abs(yL.Y * yr.Yprime) + std::abs(yL.Yprime * yr.Y));
    const double s2 = std::max(1.0, std::abs(yL.Y * ya.Yprime) + std::abs(ya.Y * yL.Yprime));
    const double first = ya.Y - (yL.Y * yr.Yprime - yL.Yprime * yr.Y);
    const double second = yr.Y - (yL.Y * ya.Yprime - ya.Y * yL.Yprime);
    return {std::abs(first) / s1, std::abs(second) / s2};
}

}  // namespace curvbill
