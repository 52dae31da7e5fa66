#include "curvbill/integralgeom.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace curvbill {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double row_integral(const BoundaryCurve& curve, const GaussLegendre& gl, int row, double x) {
    const double theta = curve.theta_at(x);
    double sum = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double phi = 0.5 * kPi * (gl.nodes[j] + 1.0);
        try {
            sum += gl.weights[j] * shoot(curve, theta, phi).chord.L * std::sin(phi);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "phase_average_length: chord solve failed at node (" << row << ", " << j << "), x = " << x
                << ", phi = " << phi << ": " << e.what();
            throw NumericalError(msg.str());
        }
    }
    return 0.5 * kPi * sum;
}

}  // namespace

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(n));
    gl.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        gl.nodes[static_cast<std::size_t>(i)] = -x;
        gl.weights[static_cast<std::size_t>(i)] = w;
        gl.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) gl.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return gl;
}

double phase_average_length(const BoundaryCurve& curve, PhaseGrid grid, int threads) {
    if (grid.nx < 16 || grid.nphi < 16) throw ValidationError("phase_average_length: grid sizes must be >= 16");
    const GaussLegendre gl = gauss_legendre(grid.nphi);
    const double h = curve.perimeter() / grid.nx;
    std::vector<double> rows(static_cast<std::size_t>(grid.nx), 0.0);

    const int workers = std::clamp(threads, 1, grid.nx);
    if (workers == 1) {
        for (int i = 0; i < grid.nx; ++i) rows[i] = row_integral(curve, gl, i, i * h);
    } else {
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (int i = w; i < grid.nx; i += workers) rows[i] = row_integral(curve, gl, i, i * h);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    double total = 0.0;
    for (double r : rows) total += r;
    return h * total;
}

double santalo_residual(const BoundaryCurve& curve, PhaseGrid grid, int threads) {
    return phase_average_length(curve, grid, threads) - kTwoPi * curve.area();
}

double inner_integral(double k, Curvature tag) {
    if (!std::isfinite(k)) throw ValidationError("inner_integral: k must be finite");
    switch (tag) {
        case Curvature::Hyperbolic:
            if (!(k > 1.0)) throw ValidationError("inner_integral: K = -1 requires k > 1");
            return 0.5 * kPi / (k + std::sqrt(k * k - 1.0));
        case Curvature::Sphere:
            if (!(k > 0.0)) throw ValidationError("inner_integral: K = +1 requires k > 0");
            return 0.5 * kPi / (std::sqrt(k * k + 1.0) + k);
        case Curvature::Flat:
            if (!(k > 0.0)) throw ValidationError("inner_integral: K = 0 requires k > 0");
            return 0.25 * kPi / k;
    }
    return 0.0;
}

double rigidity_integral(const BoundaryCurve& curve) {
    const double K = sign(curve.tag());
    if (curve.tag() == Curvature::Hyperbolic && !(curve.min_curvature() > 1.0)) {
        std::ostringstream msg;
        msg << "rigidity_integral: curve is not horocyclically convex (min k = " << curve.min_curvature()
            << " <= 1)";
        throw HorocycleConvexityError(msg.str(), curve.min_curvature());
    }
    return curve.integrate([K](const CurveSample& s) { return std::sqrt(s.k * s.k + K); });
}

double isoperimetric_deficit(const BoundaryCurve& curve) {
    const double P = curve.perimeter();
    const double A = curve.area();
    return P * P - 4.0 * kPi * A + sign(curve.tag()) * A * A;
}

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::CircleConsistent: return "circle-consistent";
        case Verdict::StrictlyNoncircular: return "strictly-noncircular";
        case Verdict::InvalidInput: return "invalid-input";
    }
    return "?";
}

AuditReport rigidity_audit(const BoundaryCurve& curve, PhaseGrid grid, int threads) {
    AuditReport r;
    r.tag = curve.tag();
    r.P = curve.perimeter();
    r.A = curve.area();
    r.min_k = curve.min_curvature();
    r.max_k = curve.max_curvature();
    r.iso_deficit = isoperimetric_deficit(curve);
    r.gb_residual = gauss_bonnet_residual(curve);

    const BoundaryCurve fine = build_curve(curve.spec(), 2 * curve.resolution());
    r.area_delta = fine.area() - r.A;
    r.perimeter_delta = fine.perimeter() - r.P;

    r.santalo_lhs = phase_average_length(curve, grid, threads);
    r.santalo_rhs = kTwoPi * r.A;
    r.santalo_rel = (r.santalo_lhs - r.santalo_rhs) / r.santalo_rhs;
    r.santalo_delta = phase_average_length(curve, grid.doubled(), threads) - r.santalo_lhs;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.horocycle_ok = curve.tag() != Curvature::Hyperbolic || r.min_k > 1.0;
    if (!r.horocycle_ok) {
        std::ostringstream msg;
        msg << "horocycle convexity fails: min k = " << r.min_k << " <= 1";
        r.diagnostic = msg.str();
        r.rigidity_I = r.rigidity_gap = r.rigidity_delta = nan;
        r.area_bound = r.area_bound_slack = r.cauchy_schwarz_slack = nan;
        r.verdict = Verdict::InvalidInput;
        return r;
    }

    r.rigidity_I = rigidity_integral(curve);
    r.rigidity_gap = r.rigidity_I - kTwoPi;
    r.rigidity_delta = rigidity_integral(fine) - r.rigidity_I;

    const double I = r.rigidity_I;
    switch (curve.tag()) {
        case Curvature::Sphere:
            r.area_bound = curve.integrate([](const CurveSample& s) { return std::sqrt(s.k * s.k + 1.0) - s.k; });
            r.cauchy_schwarz_slack = (I - r.P) * (I + r.P) - (kTwoPi - r.A) * (kTwoPi - r.A);
            break;
        case Curvature::Hyperbolic:
            r.area_bound = curve.integrate([](const CurveSample& s) { return s.k - std::sqrt(s.k * s.k - 1.0); });
            r.cauchy_schwarz_slack = std::sqrt((r.A + kTwoPi - r.P) * (r.A + kTwoPi + r.P)) - I;
            break;
        case Curvature::Flat:
            r.area_bound = r.area_bound_slack = r.cauchy_schwarz_slack = nan;
            r.verdict = Verdict::InvalidInput;
            r.diagnostic = "the rigidity functional equals 2 pi for every convex planar curve";
            return r;
    }
    r.area_bound_slack = r.A - r.area_bound;

    const bool circle = std::abs(r.rigidity_gap) <= kCircleTolerance && std::abs(r.gb_residual) <= kCircleTolerance &&
                        std::abs(r.iso_deficit) <= kCircleTolerance;
    r.verdict = circle ? Verdict::CircleConsistent : Verdict::StrictlyNoncircular;
    return r;
}

}  // namespace curvbill
