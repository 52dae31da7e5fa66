#include "curvbill/errors.hpp"
#include "curvbill/integralgeom.hpp"
#include "generators.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace curvbill {
namespace {

using testing::Rng;
using testing::uniform;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;
constexpr Curvature kAll[] = {Curvature::Sphere, Curvature::Hyperbolic, Curvature::Flat};

double kronrod(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

TEST(GaussLegendre, ExactForPolynomials) {
    for (int n : {1, 2, 5, 16, 64}) {
        const GaussLegendre g = gauss_legendre(n);
        ASSERT_EQ(static_cast<int>(g.nodes.size()), n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += g.weights[i] * std::pow(g.nodes[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            EXPECT_NEAR(sum, exact, 1e-13) << n << ' ' << d;
        }
        for (int i = 1; i < n; ++i) EXPECT_LT(g.nodes[i - 1], g.nodes[i]);
    }
    EXPECT_THROW(gauss_legendre(0), ValidationError);
}

TEST(GaussLegendre, SmoothIntegrandAgainstKronrod) {
    const GaussLegendre g = gauss_legendre(32);
    auto f = [](double x) { return std::exp(x) * std::cos(3 * x); };
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * f(g.nodes[i]);
    EXPECT_NEAR(sum, kronrod(f, -1, 1), 1e-13);
}

TEST(InnerIntegral, AgreesWithAdaptiveQuadrature) {
    Rng rng(71);
    for (int i = 0; i < 20; ++i) {
        const double k = testing::log_uniform(rng, 1.01, 50.0);
        EXPECT_NEAR(inner_integral(k, Curvature::Hyperbolic),
                    kronrod([&](double p) { return std::atanh(std::sin(p) / k) * std::sin(p); }, 0, kPi / 2), 1e-12);
        const double ks = testing::log_uniform(rng, 0.01, 50.0);
        EXPECT_NEAR(inner_integral(ks, Curvature::Sphere),
                    kronrod([&](double p) { return std::atan(std::sin(p) / ks) * std::sin(p); }, 0, kPi / 2), 1e-12);
        EXPECT_NEAR(inner_integral(ks, Curvature::Flat), kPi / (4 * ks), 1e-14 / ks);
    }
}

TEST(InnerIntegral, LargeCurvatureLimit) {
    const double k = 1e6;
    for (Curvature tag : {Curvature::Sphere, Curvature::Hyperbolic})
        EXPECT_LE(std::abs(inner_integral(k, tag) * 4 * k / kPi - 1.0), 1e-6);
}

TEST(InnerIntegral, DomainErrors) {
    EXPECT_THROW(inner_integral(1.0, Curvature::Hyperbolic), ValidationError);
    EXPECT_THROW(inner_integral(0.5, Curvature::Hyperbolic), ValidationError);
    EXPECT_THROW(inner_integral(0.0, Curvature::Sphere), ValidationError);
    EXPECT_THROW(inner_integral(-1.0, Curvature::Flat), ValidationError);
    EXPECT_THROW(inner_integral(std::nan(""), Curvature::Sphere), ValidationError);
}

TEST(Santalo, CirclesAreExact) {
    for (Curvature tag : kAll) {
        const BoundaryCurve c = build_curve(CurveSpec::circle(tag, 0.7));
        const double lhs = phase_average_length(c, {64, 32}, 4);
        EXPECT_NEAR(lhs / (kTwoPi * c.area()), 1.0, 1e-10) << to_string(tag);
    }
}

TEST(Santalo, CircleAgainstChordLengthFormula) {
    // right triangle with hypotenuse r and angle pi/2 - phi at the boundary point: tan(L/2) = tan(r) sin(phi)
    const double r = 0.9;
    auto L = [&](double phi) { return 2 * std::atan(std::tan(r) * std::sin(phi)); };
    const BoundaryCurve c = build_curve(CurveSpec::circle(Curvature::Sphere, r));
    const double oracle = c.perimeter() * kronrod([&](double p) { return L(p) * std::sin(p); }, 0, kPi);
    EXPECT_NEAR(phase_average_length(c, {32, 32}, 2), oracle, 1e-10);
    EXPECT_NEAR(oracle, kTwoPi * c.area(), 1e-10);
}

TEST(Santalo, PerturbedCurvesAndGridDoubling) {
    Rng rng(72);
    for (Curvature tag : kAll) {
        const BoundaryCurve c = testing::random_convex_curve(rng, tag);
        const PhaseGrid grid{128, 32};
        const double lhs = phase_average_length(c, grid, 4);
        const double fine = phase_average_length(c, grid.doubled(), 4);
        const double rhs = kTwoPi * c.area();
        EXPECT_LE(std::abs(lhs - rhs) / rhs, 1e-3) << to_string(tag);
        EXPECT_LE(std::abs(fine - rhs), std::abs(lhs - rhs) + 1e-10 * rhs);
        EXPECT_NEAR(santalo_residual(c, grid, 4), lhs - rhs, 1e-12);
    }
}

TEST(Santalo, ShrinkingCircle) {
    for (Curvature tag : kAll) {
        const BoundaryCurve c = build_curve(CurveSpec::circle(tag, 1e-2));
        const double lhs = phase_average_length(c, {16, 16}, 1);
        EXPECT_LT(lhs, 2.1e-3);
        EXPECT_NEAR(lhs / (kTwoPi * c.area()), 1.0, 1e-10);
    }
}

TEST(Santalo, ThreadCountDoesNotChangeTheSum) {
    Rng rng(73);
    const BoundaryCurve c = testing::random_convex_curve(rng, Curvature::Hyperbolic);
    const double one = phase_average_length(c, {64, 16}, 1);
    for (int t : {2, 3, 8}) EXPECT_EQ(phase_average_length(c, {64, 16}, t), one);
    EXPECT_THROW(phase_average_length(c, {8, 16}, 1), ValidationError);
}

TEST(Rigidity, CirclesGiveTwoPi) {
    for (Curvature tag : {Curvature::Sphere, Curvature::Hyperbolic})
        for (double r : {0.3, 0.7, 1.0}) EXPECT_NEAR(rigidity_integral(build_curve(CurveSpec::circle(tag, r))), kTwoPi, 1e-10);
}

TEST(Rigidity, NoncircularSphereCurveExceedsTwoPi) {
    CurveSpec s = CurveSpec::circle(Curvature::Sphere, 0.8);
    s.harmonics = {{3, 0.05, 0.0}};
    const BoundaryCurve c = build_curve(s);
    const double I = rigidity_integral(c);
    EXPECT_GT(I - kTwoPi, 1e-4);
    // independent quadrature of the closed-form integrand in theta
    const double oracle = kronrod([&](double th) {
        const CurveFrame f = c.frame_at_theta(th);
        return std::sqrt(f.k * f.k + 1) * f.speed;
    }, 0, kTwoPi);
    EXPECT_NEAR(I, oracle, 1e-10);
}

TEST(Rigidity, HorocyclicConvexityRequired) {
    CurveSpec s = CurveSpec::circle(Curvature::Hyperbolic, 0.8);
    s.harmonics = {{3, 0.1, 0.0}};
    const BoundaryCurve c = build_curve(s);
    ASSERT_LE(c.min_curvature(), 1.0);
    try {
        rigidity_integral(c);
        FAIL() << "expected HorocycleConvexityError";
    } catch (const HorocycleConvexityError& e) {
        EXPECT_DOUBLE_EQ(e.min_curvature(), c.min_curvature());
    }
}

TEST(Isoperimetric, ZeroOnCirclesPositiveOtherwise) {
    for (Curvature tag : kAll)
        for (double r : {0.3, 0.7, 1.0}) {
            const BoundaryCurve c = build_curve(CurveSpec::circle(tag, r));
            EXPECT_LE(std::abs(isoperimetric_deficit(c)), 1e-10 * c.perimeter() * c.perimeter());
        }
    Rng rng(74);
    for (int i = 0; i < 20; ++i) EXPECT_GT(isoperimetric_deficit(testing::random_convex_curve(rng, testing::tag_of(i))), 0.0);
}

TEST(Audit, InequalityChainsOnRandomCurves) {
    // sphere: I >= 2 pi, hyperbolic (horocyclic): I <= 2 pi; Cauchy-Schwarz slack >= 0 in both
    Rng rng(75);
    for (int i = 0; i < 8; ++i) {
        const Curvature tag = i % 2 ? Curvature::Sphere : Curvature::Hyperbolic;
        const BoundaryCurve c = testing::random_convex_curve(rng, tag, tag == Curvature::Hyperbolic);
        const AuditReport r = rigidity_audit(c, {32, 16}, 4);
        EXPECT_EQ(r.verdict, Verdict::StrictlyNoncircular);
        EXPECT_GE(r.cauchy_schwarz_slack, 0.0);
        EXPECT_GT(r.iso_deficit, 0.0);
        if (tag == Curvature::Sphere) {
            EXPECT_GT(r.rigidity_gap, 0.0);
            EXPECT_NEAR(r.area_bound_slack, -r.rigidity_gap, 1e-10);
        } else {
            EXPECT_LT(r.rigidity_gap, 0.0);
            EXPECT_NEAR(r.area_bound_slack, r.rigidity_gap, 1e-10);
        }
    }
}

TEST(Audit, CirclesAreCircleConsistent) {
    for (Curvature tag : {Curvature::Sphere, Curvature::Hyperbolic}) {
        const AuditReport r = rigidity_audit(build_curve(CurveSpec::circle(tag, 0.7)), {64, 32}, 4);
        EXPECT_EQ(r.verdict, Verdict::CircleConsistent) << r.diagnostic;
        EXPECT_LE(std::abs(r.rigidity_gap), 1e-10);
        EXPECT_LE(std::abs(r.santalo_rel), 1e-10);
        EXPECT_LE(std::abs(r.area_bound_slack), 1e-10);
        EXPECT_LE(std::abs(r.cauchy_schwarz_slack), 1e-8);
    }
}

TEST(Audit, EllipseLikeIsStrictlyNoncircular) {
    const AuditReport r = rigidity_audit(build_curve(testing::ellipse_like_spec()), {64, 32}, 4);
    EXPECT_EQ(r.verdict, Verdict::StrictlyNoncircular);
    EXPECT_LE(std::abs(r.santalo_rel), 1e-3);
    EXPECT_LE(std::abs(r.gb_residual), 1e-6);
}

TEST(Audit, InvalidInputs) {
    CurveSpec s = CurveSpec::circle(Curvature::Hyperbolic, 0.8);
    s.harmonics = {{3, 0.1, 0.0}};
    const AuditReport r = rigidity_audit(build_curve(s), {32, 16}, 4);
    EXPECT_EQ(r.verdict, Verdict::InvalidInput);
    EXPECT_FALSE(r.horocycle_ok);
    EXPECT_FALSE(r.diagnostic.empty());
    EXPECT_TRUE(std::isnan(r.rigidity_I));
    // K = -1 curve with min k just below 1
    CurveSpec t = CurveSpec::circle(Curvature::Hyperbolic, 2.0);
    t.harmonics = {{2, 0.16, 0.0}};
    const BoundaryCurve c = build_curve(t);
    ASSERT_LT(c.min_curvature(), 1.0);
    ASSERT_GT(c.min_curvature(), 0.9);
    EXPECT_EQ(rigidity_audit(c, {32, 16}, 4).verdict, Verdict::InvalidInput);
    EXPECT_EQ(rigidity_audit(build_curve(CurveSpec::circle(Curvature::Flat, 1.0)), {32, 16}, 4).verdict,
              Verdict::InvalidInput);
}

TEST(Audit, DeterministicAcrossThreadCounts) {
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    const AuditReport a = rigidity_audit(c, {32, 16}, 1);
    const AuditReport b = rigidity_audit(c, {32, 16}, 5);
    EXPECT_EQ(a.santalo_lhs, b.santalo_lhs);
    EXPECT_EQ(a.santalo_delta, b.santalo_delta);
    EXPECT_EQ(a.rigidity_I, b.rigidity_I);
}

}  // namespace
}  // namespace curvbill
