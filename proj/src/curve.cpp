#include "curvbill/curve.hpp"

#include "curvbill/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

namespace curvbill {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Hermite cubic on [x0, x1] with end values y0, y1 and end slopes d0, d1.
double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

}  // namespace

CurveSpec CurveSpec::circle(Curvature tag, double r) {
    return CurveSpec{tag, SurfacePoint::origin(tag), r, {}};
}

RadialValue CurveSpec::radial(double theta) const noexcept {
    RadialValue v{c0, 0.0, 0.0};
    for (const Harmonic& h : harmonics) {
        const double c = std::cos(h.m * theta);
        const double s = std::sin(h.m * theta);
        const double m = h.m;
        v.rho += h.a * c + h.b * s;
        v.d1 += m * (-h.a * s + h.b * c);
        v.d2 -= m * m * (h.a * c + h.b * s);
    }
    return v;
}

void CurveSpec::validate() const {
    if (!std::isfinite(c0) || !(c0 > 0.0)) throw ValidationError("curve.c0 must be a positive radius");
    if (center.tag() != tag) throw ValidationError("curve.center lives on a different surface than curve.K");
    std::set<int> seen;
    for (const Harmonic& h : harmonics) {
        if (h.m < 1) throw ValidationError("curve.harmonics: order m must be >= 1");
        if (!seen.insert(h.m).second)
            throw ValidationError("curve.harmonics: order m = " + std::to_string(h.m) + " appears twice");
        if (!std::isfinite(h.a) || !std::isfinite(h.b))
            throw ValidationError("curve.harmonics: non-finite coefficient");
    }
}

double BoundaryCurve::wrap(double x) const noexcept {
    double r = std::fmod(x, perimeter_);
    if (r < 0.0) r += perimeter_;
    if (r >= perimeter_) r -= perimeter_;
    return r;
}

double BoundaryCurve::arc_length_at(double theta) const noexcept {
    double s = speed_mean_ * theta;
    const double c1 = std::cos(theta);
    const double s1 = std::sin(theta);
    double cm = c1;
    double sm = s1;
    const std::size_t n = speed_cos_.size();
    for (std::size_t m = 1; m < n; ++m) {
        s += (speed_cos_[m] * sm + speed_sin_[m] * (1.0 - cm)) / static_cast<double>(m);
        const double next_c = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = next_c;
    }
    return s;
}

double BoundaryCurve::theta_at(double x) const noexcept {
    const double turns = std::floor(x / perimeter_);
    double r = x - turns * perimeter_;
    r = std::clamp(r, 0.0, perimeter_);

    auto it = std::upper_bound(samples_.begin(), samples_.end(), r,
                               [](double v, const CurveSample& smp) { return v < smp.s; });
    std::size_t j = it == samples_.begin() ? 0 : static_cast<std::size_t>(it - samples_.begin()) - 1;
    j = std::min(j, samples_.size() - 2);
    const CurveSample& lo = samples_[j];
    const CurveSample& hi = samples_[j + 1];
    double theta = hermite(r, lo.s, hi.s, lo.theta, hi.theta, seed_slope_[j], seed_slope_[j + 1]);

    // Newton polish against the series itself so that s(theta(x)) = x to rounding.
    for (int it_count = 0; it_count < 4; ++it_count) {
        const double f = arc_length_at(theta) - r;
        const RadialValue rv = spec_.radial(theta);
        const double y = jacobi_Y(rv.rho, spec_.tag).Y;
        const double step = f / std::sqrt(rv.d1 * rv.d1 + y * y);
        theta -= step;
        if (std::abs(step) <= 1e-16 * kTwoPi) break;
    }
    return theta + turns * kTwoPi;
}

CurveFrame BoundaryCurve::frame_at_theta(double theta) const noexcept {
    const Curvature tag = spec_.tag;
    const double K = sign(tag);
    const RadialValue rv = spec_.radial(theta);
    const JacobiScalar js = jacobi_Y(rv.rho, tag);
    const double C = js.Yprime;
    const double S = js.Y;
    const double r1 = rv.d1;
    const double r2 = rv.d2;
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const Vec3& c = spec_.center.coords();
    const Vec3 u = ct * e1_ + st * e2_;
    const Vec3 up = -st * e1_ + ct * e2_;

    CurveFrame f;
    f.point = C * c + S * u;
    const Vec3 d1 = -K * S * r1 * c + C * r1 * u + S * up;
    const Vec3 d2 = -K * (C * r1 * r1 + S * r2) * c + (C * r2 - K * S * r1 * r1 - S) * u + 2.0 * C * r1 * up;
    f.speed = std::sqrt(r1 * r1 + S * S);
    f.tangent = d1 / f.speed;
    // Direction of decreasing rho, made orthogonal to the tangent.
    Vec3 w = K * S * c - C * u;
    w -= model::inner(tag, w, f.tangent) * f.tangent;
    f.normal = w / model::norm(tag, w);
    f.k = model::inner(tag, d2, f.normal) / (f.speed * f.speed);
    return f;
}

SurfacePoint BoundaryCurve::position_at(double x) const {
    return {frame_at(x).point, spec_.tag};
}

TangentVector BoundaryCurve::tangent_at(double x) const {
    const CurveFrame f = frame_at(x);
    return {SurfacePoint(f.point, spec_.tag), f.tangent};
}

double BoundaryCurve::integrate(const std::function<double(const CurveSample&)>& f) const {
    const std::size_t n = samples_.size() - 1;
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += f(samples_[j]) * samples_[j].speed;
    return sum * kTwoPi / static_cast<double>(n);
}

BoundaryCurve build_curve(const CurveSpec& spec, int resolution) {
    spec.validate();
    if (resolution < 16) throw ValidationError("curve.resolution must be at least 16");

    BoundaryCurve curve(spec);
    const auto [e1, e2] = tangent_frame(spec.center);
    curve.e1_ = e1;
    curve.e2_ = e2;
    const Curvature tag = spec.tag;
    const std::size_t n = static_cast<std::size_t>(resolution);
    const double dtheta = kTwoPi / static_cast<double>(n);
    const double hemisphere_limit = std::numbers::pi / 2 - BoundaryCurve::kMargin;

    std::vector<CurveFrame> frames(n + 1);
    double area_sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double theta = j == n ? kTwoPi : dtheta * static_cast<double>(j);
        const double rho = spec.radial(theta).rho;
        if (!(rho > 0.0)) {
            std::ostringstream msg;
            msg << "curve: radial function is not positive at theta = " << theta << " (rho = " << rho << ")";
            throw ValidationError(msg.str());
        }
        if (tag == Curvature::Sphere && rho >= hemisphere_limit) {
            std::ostringstream msg;
            msg << "curve: leaves the hemisphere margin at theta = " << theta << " (rho = " << rho << ")";
            throw ValidationError(msg.str());
        }
        frames[j] = curve.frame_at_theta(theta);
        if (tag == Curvature::Sphere && frames[j].point.z() <= std::sin(BoundaryCurve::kMargin))
            throw ValidationError("curve: leaves the open hemisphere z > 0");
        if (j < n) {
            switch (tag) {
                case Curvature::Sphere: area_sum += 2.0 * std::pow(std::sin(0.5 * rho), 2); break;
                case Curvature::Hyperbolic: area_sum += 2.0 * std::pow(std::sinh(0.5 * rho), 2); break;
                case Curvature::Flat: area_sum += 0.5 * rho * rho; break;
            }
        }
    }
    curve.area_ = area_sum * dtheta;

    // Fourier series of the speed; theta_j = 2 pi j / n exactly, so use an index table.
    std::vector<double> cos_table(n), sin_table(n);
    for (std::size_t j = 0; j < n; ++j) {
        cos_table[j] = std::cos(dtheta * static_cast<double>(j));
        sin_table[j] = std::sin(dtheta * static_cast<double>(j));
    }
    double mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) mean += frames[j].speed;
    mean /= static_cast<double>(n);
    const std::size_t max_m = n / 2;
    std::vector<double> ca(max_m, 0.0), sa(max_m, 0.0);
    std::size_t last = 0;
    for (std::size_t m = 1; m < max_m; ++m) {
        double sc = 0.0;
        double ss = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = (m * j) % n;
            sc += frames[j].speed * cos_table[idx];
            ss += frames[j].speed * sin_table[idx];
        }
        ca[m] = 2.0 * sc / static_cast<double>(n);
        sa[m] = 2.0 * ss / static_cast<double>(n);
        if (std::max(std::abs(ca[m]), std::abs(sa[m])) > 1e-17 * mean) last = m;
    }
    ca.resize(last + 1);
    sa.resize(last + 1);
    curve.speed_mean_ = mean;
    curve.speed_cos_ = std::move(ca);
    curve.speed_sin_ = std::move(sa);
    curve.perimeter_ = kTwoPi * mean;

    curve.samples_.resize(n + 1);
    double min_k = frames[0].k;
    double max_k = frames[0].k;
    for (std::size_t j = 0; j <= n; ++j) {
        const double theta = j == n ? kTwoPi : dtheta * static_cast<double>(j);
        CurveSample& smp = curve.samples_[j];
        smp.theta = theta;
        smp.s = j == 0 ? 0.0 : (j == n ? curve.perimeter_ : curve.arc_length_at(theta));
        smp.point = frames[j].point;
        smp.tangent = frames[j].tangent;
        smp.k = frames[j].k;
        smp.speed = frames[j].speed;
        min_k = std::min(min_k, smp.k);
        max_k = std::max(max_k, smp.k);
    }
    curve.min_k_ = min_k;
    curve.max_k_ = max_k;
    if (!(min_k >= BoundaryCurve::kMargin)) {
        std::ostringstream msg;
        msg << "curve: not strictly convex, min geodesic curvature " << min_k;
        throw ValidationError(msg.str());
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!(curve.samples_[j + 1].s > curve.samples_[j].s))
            throw NumericalError("curve: arc length table is not strictly increasing");
    if ((curve.samples_[n].point - curve.samples_[0].point).norm() > 1e-10)
        throw NumericalError("curve: sample table does not close up");

    // Monotone (Fritsch-Butland) slopes for the theta(s) seed interpolant, periodic.
    std::vector<double> secant(n);
    for (std::size_t j = 0; j < n; ++j)
        secant[j] = (curve.samples_[j + 1].theta - curve.samples_[j].theta) /
                    (curve.samples_[j + 1].s - curve.samples_[j].s);
    curve.seed_slope_.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t jm = (j + n - 1) % n;
        const double h0 = curve.samples_[jm + 1].s - curve.samples_[jm].s;
        const double h1 = curve.samples_[j + 1].s - curve.samples_[j].s;
        const double d0 = secant[jm];
        const double d1 = secant[j];
        const double w1 = 2 * h1 + h0;
        const double w2 = h1 + 2 * h0;
        curve.seed_slope_[j] = (d0 * d1 > 0.0) ? (w1 + w2) / (w1 / d0 + w2 / d1) : 0.0;
    }
    curve.seed_slope_[n] = curve.seed_slope_[0];
    return curve;
}

double geodesic_curvature(const BoundaryCurve& curve, double x) { return curve.frame_at(x).k; }

double enclosed_area(const BoundaryCurve& curve) { return curve.area(); }

double gauss_bonnet_residual(const BoundaryCurve& curve) {
    const double total_k = curve.integrate([](const CurveSample& s) { return s.k; });
    return total_k + sign(curve.tag()) * curve.area() - 2.0 * std::numbers::pi;
}

}  // namespace curvbill
