#include "curvbill/errors.hpp"
#include "curvbill/variational.hpp"
#include "generators.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <numbers>

namespace curvbill {
namespace {

using testing::Rng;
using testing::uniform;
using testing::uniform_int;

constexpr double kPi = std::numbers::pi;
constexpr Curvature kAll[] = {Curvature::Sphere, Curvature::Hyperbolic, Curvature::Flat};

Eigen::MatrixXd hessian(const JacobiSegment& seg) {
    const int m = seg.interior_size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r) {
        const int n = seg.first + 1 + r;
        H(r, r) = seg.a_at(n);
        if (r + 1 < m) H(r, r + 1) = H(r + 1, r) = seg.b_at(n);
    }
    return H;
}

int sign_changes(const std::vector<double>& v) {
    int count = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if ((v[i - 1] > 0) != (v[i] > 0)) ++count;
    return count;
}

// Forward solution from xi_first = 0, xi_first+1 = 1, over first+1..last.
std::vector<double> forward_solution(const JacobiSegment& seg) {
    std::vector<double> xi{0.0, 1.0};
    for (int n = seg.first + 1; n < seg.last; ++n) {
        const std::size_t k = xi.size();
        xi.push_back(-(seg.a_at(n) * xi[k - 1] + seg.b_at(n - 1) * xi[k - 2]) / seg.b_at(n));
    }
    xi.erase(xi.begin());
    return xi;
}

Configuration ellipse_orbit(double theta0, double Phi0, int bounces) {
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    return orbit(c, {c.arc_length_at(theta0), Phi0}, bounces);
}

TEST(JacobiCoefficients, CirclesHaveConstantParabolicCoefficients) {
    Rng rng(51);
    for (Curvature tag : kAll) {
        const BoundaryCurve c = build_curve(CurveSpec::circle(tag, 0.7));
        const Configuration orb = orbit(c, testing::random_phase(rng, c, 0.9), 30);
        const JacobiSegment seg = jacobi_coefficients(orb, 0, 30);
        for (int n = 1; n < 30; ++n) {
            EXPECT_NEAR(seg.a_at(n), seg.a_at(1), 1e-10);
            EXPECT_NEAR(seg.b_at(n), seg.b_at(0), 1e-10);
            EXPECT_NEAR(seg.a_at(n), -2 * seg.b_at(n), 1e-9 * seg.b_at(n));
        }
    }
}

TEST(JacobiCoefficients, TwistMatchesSineFormula) {
    Rng rng(52);
    for (Curvature tag : kAll) {
        const BoundaryCurve c = testing::random_convex_curve(rng, tag);
        const Configuration orb = orbit(c, testing::random_phase(rng, c), 20);
        const JacobiSegment seg = jacobi_coefficients(orb, 0, 20);
        for (int n = 0; n < 20; ++n) {
            const ChordData& ch = orb.chords[n];
            EXPECT_NEAR(seg.b_at(n), std::sin(ch.phi) * std::sin(ch.psi) / jacobi_Y(ch.L, tag).Y, 1e-12 * seg.b_at(n));
            EXPECT_GT(seg.b_at(n), 0.0);
        }
    }
}

TEST(JacobiCoefficients, HessianOfActionByFiniteDifferences) {
    Rng rng(53);
    const double h = 1e-4;
    for (Curvature tag : kAll) {
        const BoundaryCurve c = testing::random_convex_curve(rng, tag);
        const int n = 8;
        const Configuration orb = orbit(c, testing::random_phase(rng, c, 0.8), n);
        const JacobiSegment seg = jacobi_coefficients(orb, 0, n);
        std::vector<double> x;
        double acc = orb.points[0].x;
        x.push_back(acc);
        for (const ChordData& ch : orb.chords) x.push_back(acc += boundary_advance(c, ch));
        auto action = [&](const std::vector<double>& xs) {
            double w = 0.0;
            for (int i = 0; i < n; ++i)
                w += model::distance(tag, c.frame_at(xs[i]).point, c.frame_at(xs[i + 1]).point);
            return w;
        };
        const double scale = hessian(seg).cwiseAbs().maxCoeff();
        for (int i = 1; i < n; ++i) {
            for (int j = i; j <= std::min(i + 1, n - 1); ++j) {
                auto shifted = [&](double di, double dj) {
                    std::vector<double> xs = x;
                    xs[i] += di;
                    xs[j] += dj;
                    return action(xs);
                };
                const double fd = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) / (4 * h * h);
                const double exact = i == j ? seg.a_at(i) : seg.b_at(i);
                EXPECT_LE(std::abs(fd - exact) / scale, 1e-5) << i << ',' << j;
            }
        }
    }
}

TEST(JacobiCoefficients, WindowValidation) {
    const Configuration orb = ellipse_orbit(0.3, 0.2, 5);
    EXPECT_THROW(jacobi_coefficients(orb, -1, 3), ValidationError);
    EXPECT_THROW(jacobi_coefficients(orb, 2, 6), ValidationError);
    EXPECT_THROW(jacobi_coefficients(orb, 3, 3), ValidationError);
}

TEST(ConjugatePoints, TwoPointWindowHasNone) {
    const Configuration orb = ellipse_orbit(0.3, 0.2, 5);
    EXPECT_FALSE(conjugate_point_test(jacobi_coefficients(orb, 1, 2)).has_value());
    EXPECT_THROW(second_variation_definiteness(jacobi_coefficients(orb, 1, 2)), ValidationError);
}

TEST(ConjugatePoints, SingleInteriorPoint) {
    const JacobiSegment neg{0, 2, {-1.5}, {0.4, 0.7}};
    const DefinitenessReport r = second_variation_definiteness(neg);
    EXPECT_EQ(r.kind, Definiteness::NegativeDefinite);
    EXPECT_EQ(r.negative, 1);
    EXPECT_FALSE(conjugate_point_test(neg).has_value());
    const JacobiSegment pos{0, 2, {0.5}, {0.4, 0.7}};
    EXPECT_EQ(second_variation_definiteness(pos).kind, Definiteness::Indefinite);
    EXPECT_TRUE(conjugate_point_test(pos).has_value());
}

TEST(ConjugatePoints, CircleWindowsAreConjugateFree) {
    Rng rng(54);
    for (Curvature tag : kAll) {
        const BoundaryCurve c = build_curve(CurveSpec::circle(tag, 0.6));
        const Configuration orb = orbit(c, testing::random_phase(rng, c, 0.9), 40);
        const JacobiSegment seg = jacobi_coefficients(orb, 0, 40);
        EXPECT_FALSE(conjugate_point_test(seg).has_value());
        EXPECT_EQ(second_variation_definiteness(seg).kind, Definiteness::NegativeDefinite);
    }
}

TEST(ConjugatePoints, SturmCountMatchesEigenvalues) {
    // sign changes of the forward solution = number of positive eigenvalues of the second variation
    Rng rng(55);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const BoundaryCurve c = trial % 2 ? build_curve(testing::ellipse_like_spec())
                                          : testing::random_convex_curve(rng, testing::tag_of(trial / 2));
        const Configuration orb = orbit(c, testing::random_phase(rng, c, 0.9), 40);
        const int i = uniform_int(rng, 0, 20);
        const int j = uniform_int(rng, i + 2, 40);
        const JacobiSegment seg = jacobi_coefficients(orb, i, j);
        const Eigen::MatrixXd H = hessian(seg);
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues();
        const double scale = H.cwiseAbs().maxCoeff();
        if ((ev.cwiseAbs().array() < 1e-6 * scale).any()) continue;
        const int positive = static_cast<int>((ev.array() > 0).count());
        EXPECT_EQ(sign_changes(forward_solution(seg)), positive);
        const DefinitenessReport r = second_variation_definiteness(seg);
        if (r.kind != Definiteness::SemidefiniteDegenerate) {
            EXPECT_EQ(r.positive + r.negative, seg.interior_size());
            if (r.kind == Definiteness::NegativeDefinite) {
                EXPECT_EQ(positive, 0);
            }
        }
        ++checked;
    }
    EXPECT_GE(checked, 40);
}

TEST(ConjugatePoints, ConjugateFreeIffNegativeDefinite) {
    Rng rng(56);
    int with = 0, without = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
        const Configuration orb = orbit(c, testing::random_phase(rng, c, 0.95), 30);
        const int i = uniform_int(rng, 0, 10);
        const JacobiSegment seg = jacobi_coefficients(orb, i, uniform_int(rng, i + 2, 30));
        const DefinitenessReport r = second_variation_definiteness(seg);
        if (r.kind == Definiteness::SemidefiniteDegenerate) continue;
        const bool conj = conjugate_point_test(seg).has_value();
        EXPECT_EQ(conj, r.kind != Definiteness::NegativeDefinite);
        (conj ? with : without) += 1;
    }
    EXPECT_GT(with, 0);
    EXPECT_GT(without, 0);
}

TEST(ConjugatePoints, WitnessSolvesJacobiEquation) {
    const Configuration orb = ellipse_orbit(kPi / 2, 0.0, 30);
    const JacobiSegment seg = jacobi_coefficients(orb, 0, 30);
    const auto pair = conjugate_point_test(seg);
    ASSERT_TRUE(pair.has_value());
    EXPECT_LT(pair->i, pair->k);
    EXPECT_EQ(pair->witness.at(pair->i), 0.0);
    EXPECT_LE(jacobi_residual(seg, pair->witness), 1e-12);
    const double last = pair->witness.at(pair->k);
    const double prev = pair->witness.at(pair->k - 1);
    EXPECT_TRUE(last * prev < 0 || std::abs(last) <= 1e-9 * std::abs(prev));
}

TEST(Cocycle, CircleValueIsOne) {
    Rng rng(57);
    for (Curvature tag : kAll) {
        const BoundaryCurve c = build_curve(CurveSpec::circle(tag, 0.7));
        const CocycleEstimate e = hopf_cocycle(c, testing::random_phase(rng, c, 0.9), 64);
        EXPECT_EQ(e.status, CocycleStatus::Converged);
        EXPECT_NEAR(e.nu1, 1.0, 1e-10);
    }
}

TEST(Cocycle, AxisOrbitMatchesConstantCoefficientRoot) {
    // the long-axis diameter is a period-two orbit with equal ends; b nu^2 + a nu + b = 0
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    const double L = 1.8;
    const double k = c.frame_at_theta(0.0).k;
    const double L11 = std::cos(L) / std::sin(L) - k;
    const double a = 2 * L11;
    const double b = 1 / std::sin(L);
    const double nu = (-a - std::sqrt(a * a - 4 * b * b)) / (2 * b);
    const CocycleEstimate e = hopf_cocycle(c, {0.0, 0.0}, 64);
    ASSERT_EQ(e.status, CocycleStatus::Converged);
    EXPECT_NEAR(e.nu1, nu, 1e-10);
    EXPECT_NEAR(e.nu1, 0.34151, 5e-6);
}

TEST(Cocycle, MultiplicativeAlongTheOrbit) {
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    const Configuration orb = orbit(c, {0.0, 0.0}, 40);
    std::vector<CocycleEstimate> est;
    for (int n = 0; n <= 4; ++n) {
        est.push_back(hopf_cocycle(orb, n, 32));
        ASSERT_EQ(est.back().status, CocycleStatus::Converged) << n;
    }
    for (int n = 0; n <= 4; ++n)
        for (int m = 1; m <= 4 && n + m <= 4; ++m)
            EXPECT_NEAR(est[0].field[n + m], est[0].field[n] * est[n].field[m], 1e-6);
}

TEST(Cocycle, ShortAxisOrbitHasConjugatePoints) {
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    const CocycleEstimate e = hopf_cocycle(c, {c.arc_length_at(kPi / 2), 0.0}, 64);
    EXPECT_EQ(e.status, CocycleStatus::ConjugatePoints);
    EXPECT_FALSE(e.converged);
    EXPECT_GT(e.conjugate_index, 0);
}

TEST(Cocycle, SlopeIsInvariantUnderTheMap) {
    const BoundaryCurve c = build_curve(testing::ellipse_like_spec());
    const double P = c.perimeter();
    const double h = 1e-6;
    const Configuration orb = orbit(c, {0.0, 0.0}, 40);
    for (int n = 0; n < 3; ++n) {
        const PhasePoint p = orb.points[n];
        const PhasePoint q = orb.points[n + 1];
        const double mp = monotone_slope(c, p, hopf_cocycle(orb, n, 32).nu1);
        const double mq = monotone_slope(c, q, hopf_cocycle(orb, n + 1, 32).nu1);
        const PhasePoint fwd = billiard_step(c, {p.x + h, p.Phi + h * mp});
        const PhasePoint bwd = billiard_step(c, {p.x - h, p.Phi - h * mp});
        const double dx = std::remainder(fwd.x - bwd.x, P);
        const double dPhi = fwd.Phi - bwd.Phi;
        EXPECT_NEAR(dPhi / dx, mq, 1e-6 * std::max(1.0, std::abs(mq)));
    }
}

}  // namespace
}  // namespace curvbill
