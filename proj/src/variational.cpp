#include "curvbill/variational.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvbill {

namespace {

constexpr double kZeroTolerance = 1e-9;

// Thomas algorithm for b_{n-1} xi_{n-1} + a_n xi_n + b_n xi_{n+1} = 0 on
// n = 1..N-1 (relative to first) with xi_0 = 1, xi_N = 0. Returns xi_0..xi_N.
std::vector<double> solve_stable_window(const JacobiSegment& seg) {
    const int m = seg.interior_size();
    std::vector<double> diag(static_cast<std::size_t>(m));
    std::vector<double> rhs(static_cast<std::size_t>(m));
    std::vector<double> upper(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        const int n = seg.first + 1 + k;
        diag[k] = seg.a_at(n);
        upper[k] = seg.b_at(n);
        rhs[k] = k == 0 ? -seg.b_at(seg.first) : 0.0;
    }
    for (int k = 1; k < m; ++k) {
        const double lower = seg.b_at(seg.first + k);
        const double w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    std::vector<double> xi(static_cast<std::size_t>(m) + 2, 0.0);
    xi.front() = 1.0;
    for (int k = m - 1; k >= 0; --k) {
        const double next = k + 1 < m ? xi[k + 2] : 0.0;
        xi[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
    }
    return xi;
}

}  // namespace

JacobiSegment jacobi_coefficients(const Configuration& config, int i, int j) {
    const int last_point = static_cast<int>(config.points.size()) - 1;
    if (i < 0 || j <= i || j > last_point || j > static_cast<int>(config.chords.size())) {
        std::ostringstream msg;
        msg << "jacobi_coefficients: window [" << i << ", " << j << "] outside configuration of "
            << config.points.size() << " points";
        throw ValidationError(msg.str());
    }
    JacobiSegment seg;
    seg.first = i;
    seg.last = j;
    seg.b.reserve(static_cast<std::size_t>(j - i));
    for (int n = i; n < j; ++n) {
        const double b = config.chords[n].L12;
        if (!(b > 0.0)) throw NumericalError("jacobi_coefficients: b_n <= 0 (twist condition)");
        seg.b.push_back(b);
    }
    seg.a.reserve(static_cast<std::size_t>(std::max(0, j - i - 1)));
    for (int n = i + 1; n < j; ++n) seg.a.push_back(config.chords[n - 1].L22 + config.chords[n].L11);
    return seg;
}

double jacobi_residual(const JacobiSegment& seg, const JacobiField& field) {
    const int lo = std::max(seg.first + 1, field.first + 1);
    const int hi = std::min(seg.last - 1, field.first + static_cast<int>(field.xi.size()) - 2);
    double worst = 0.0;
    for (int n = lo; n <= hi; ++n) {
        const double t0 = seg.b_at(n - 1) * field.at(n - 1);
        const double t1 = seg.a_at(n) * field.at(n);
        const double t2 = seg.b_at(n) * field.at(n + 1);
        const double scale = std::abs(t0) + std::abs(t1) + std::abs(t2);
        if (scale > 0.0) worst = std::max(worst, std::abs(t0 + t1 + t2) / scale);
    }
    return worst;
}

std::optional<ConjugatePair> conjugate_point_test(const JacobiSegment& seg) {
    for (int i = seg.first; i + 2 <= seg.last; ++i) {
        JacobiField f;
        f.first = i;
        f.xi = {0.0, 1.0};
        double max_abs = 1.0;
        for (int n = i + 1; n < seg.last; ++n) {
            const double prev = f.at(n - 1);
            const double cur = f.at(n);
            const double next = -(seg.b_at(n - 1) * prev + seg.a_at(n) * cur) / seg.b_at(n);
            f.xi.push_back(next);
            max_abs = std::max(max_abs, std::abs(next));
            if (std::abs(next) <= kZeroTolerance * max_abs || cur * next < 0.0) {
                return ConjugatePair{i, n + 1, std::move(f)};
            }
        }
    }
    return std::nullopt;
}

const char* to_string(Definiteness d) noexcept {
    switch (d) {
        case Definiteness::NegativeDefinite: return "negative-definite";
        case Definiteness::SemidefiniteDegenerate: return "semidefinite-degenerate";
        case Definiteness::Indefinite: return "indefinite";
    }
    return "?";
}

DefinitenessReport second_variation_definiteness(const JacobiSegment& seg) {
    const int m = seg.interior_size();
    if (m < 1) throw ValidationError("second_variation_definiteness: window has no interior point");

    double scale = 0.0;
    for (double v : seg.a) scale = std::max(scale, std::abs(v));
    for (double v : seg.b) scale = std::max(scale, std::abs(v));
    const double tol = kZeroTolerance * scale;

    DefinitenessReport rep{Definiteness::NegativeDefinite, 0, 0, 0, {}};
    rep.pivots.reserve(static_cast<std::size_t>(m));
    double d = 0.0;
    for (int k = 0; k < m; ++k) {
        const int n = seg.first + 1 + k;
        d = k == 0 ? seg.a_at(n) : seg.a_at(n) - seg.b_at(n - 1) * seg.b_at(n - 1) / d;
        rep.pivots.push_back(d);
        if (std::abs(d) <= tol) {
            ++rep.zero;
            rep.kind = rep.positive > 0 ? Definiteness::Indefinite : Definiteness::SemidefiniteDegenerate;
            return rep;
        }
        if (d < 0.0) ++rep.negative; else ++rep.positive;
    }
    if (rep.positive > 0) rep.kind = Definiteness::Indefinite;
    return rep;
}

const char* to_string(CocycleStatus s) noexcept {
    switch (s) {
        case CocycleStatus::Converged: return "converged";
        case CocycleStatus::NotConverged: return "not-converged";
        case CocycleStatus::ConjugatePoints: return "conjugate-points";
    }
    return "?";
}

CocycleEstimate hopf_cocycle(const Configuration& config, int start, int max_window) {
    if (max_window < 4) throw ValidationError("hopf_cocycle: max_window must be at least 4");
    if (start < 0 || start + max_window > static_cast<int>(config.chords.size()))
        throw ValidationError("hopf_cocycle: configuration shorter than start + max_window");

    CocycleEstimate est;
    std::vector<double> prev_field;
    double prev_extrap = 0.0;
    bool have_extrap = false;

    for (int N = 4; N <= max_window; N *= 2) {
        const JacobiSegment seg = jacobi_coefficients(config, start, start + N);
        std::vector<double> xi = solve_stable_window(seg);
        est.window = N;
        est.history.emplace_back(N, xi[1]);

        for (int k = 1; k < N; ++k) {
            if (!(xi[k] > 0.0)) {
                est.status = CocycleStatus::ConjugatePoints;
                est.conjugate_index = start + k;
                est.converged = false;
                est.field = std::move(xi);
                est.nu1 = est.field[1];
                return est;
            }
        }

        if (!prev_field.empty()) {
            const double raw_prev = prev_field[1];
            if (std::abs(xi[1] - raw_prev) <= kCocycleTolerance) {
                est.nu1 = xi[1];
                est.converged = true;
                est.status = CocycleStatus::Converged;
                est.field = std::move(xi);
                return est;
            }
            // Richardson step against the half window: removes the 1/N term.
            const double extrap = 2.0 * xi[1] - raw_prev;
            if (have_extrap && std::abs(extrap - prev_extrap) <= kCocycleTolerance) {
                est.nu1 = extrap;
                est.converged = true;
                est.status = CocycleStatus::Converged;
                est.field.resize(prev_field.size());
                for (std::size_t k = 0; k < prev_field.size(); ++k) est.field[k] = 2.0 * xi[k] - prev_field[k];
                return est;
            }
            prev_extrap = extrap;
            have_extrap = true;
        }
        prev_field = std::move(xi);
    }

    est.status = CocycleStatus::NotConverged;
    est.nu1 = prev_field.empty() ? 0.0 : prev_field[1];
    est.field = std::move(prev_field);
    return est;
}

CocycleEstimate hopf_cocycle(const BoundaryCurve& curve, PhasePoint p, int max_window) {
    if (max_window < 4) throw ValidationError("hopf_cocycle: max_window must be at least 4");
    return hopf_cocycle(orbit(curve, p, max_window), 0, max_window);
}

double monotone_slope(const BoundaryCurve& curve, PhasePoint p, double nu1) {
    if (!(nu1 > 0.0)) throw ValidationError("monotone_slope: nu1 must be positive");
    if (!(std::abs(p.Phi) < 1.0 - kGrazingEps)) throw GrazingError("monotone_slope: grazing phase point", 0);
    const ChordData c = shoot(curve, curve.theta_at(curve.wrap(p.x)), std::acos(p.Phi)).chord;
    return -(c.L11 + c.L12 * nu1);
}

}  // namespace curvbill
