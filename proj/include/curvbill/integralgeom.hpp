#pragma once

// Integrals over the phase cylinder and along the boundary: the invariant
// measure sin phi dx dphi, Santalo's formula, the rigidity functional
// I = integral of sqrt(k^2 + K) ds and the isoperimetric deficit.

#include "curvbill/billiard.hpp"

#include <string>
#include <vector>

namespace curvbill {

struct PhaseGrid {
    int nx = 256;
    int nphi = 64;

    PhaseGrid doubled() const noexcept { return {2 * nx, 2 * nphi}; }
};

struct GaussLegendre {
    std::vector<double> nodes;    // ascending, in (-1, 1)
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton on P_n from Chebyshev guesses).
GaussLegendre gauss_legendre(int n);

/// Integral of L(x, phi) sin phi over [0, P) x (0, pi): periodic trapezoid in x,
/// Gauss-Legendre in phi. Rows are split over `threads` workers; the sum is
/// reduced in row order so the result does not depend on the thread count.
/// Throws NumericalError naming the node if a chord solve fails.
double phase_average_length(const BoundaryCurve& curve, PhaseGrid grid, int threads = 1);

/// phase_average_length - 2 pi A.
double santalo_residual(const BoundaryCurve& curve, PhaseGrid grid, int threads = 1);

/// Closed form of the integral over (0, pi/2) of arctanh(sin phi / k) sin phi
/// (K = -1, k > 1), arctan(sin phi / k) sin phi (K = +1, k > 0), or
/// (sin phi / k) sin phi (K = 0, k > 0).
double inner_integral(double k, Curvature tag);

/// I = integral over the boundary of sqrt(k^2 + K). For K = -1 throws
/// HorocycleConvexityError unless min k > 1.
double rigidity_integral(const BoundaryCurve& curve);

/// P^2 - 4 pi A + K A^2; non-negative, zero for circles.
double isoperimetric_deficit(const BoundaryCurve& curve);

enum class Verdict { CircleConsistent, StrictlyNoncircular, InvalidInput };

const char* to_string(Verdict v) noexcept;

inline constexpr double kCircleTolerance = 1e-6;

struct AuditReport {
    Curvature tag = Curvature::Flat;
    double P = 0.0;
    double A = 0.0;
    double min_k = 0.0;
    double max_k = 0.0;

    double santalo_lhs = 0.0;    // integral of L d mu
    double santalo_rhs = 0.0;    // 2 pi A
    double santalo_rel = 0.0;    // (lhs - rhs) / rhs
    double santalo_delta = 0.0;  // lhs(doubled grid) - lhs

    double rigidity_I = 0.0;     // NaN when not defined
    double rigidity_gap = 0.0;   // I - 2 pi
    double rigidity_delta = 0.0; // I(doubled resolution) - I

    double iso_deficit = 0.0;
    double gb_residual = 0.0;
    double area_delta = 0.0;     // A(doubled resolution) - A
    double perimeter_delta = 0.0;

    // K = +1: A - integral of (sqrt(k^2 + 1) - k); K = -1: A - integral of (k - sqrt(k^2 - 1))
    double area_bound = 0.0;
    double area_bound_slack = 0.0;
    // K = +1: (I - P)(I + P) - (2 pi - A)^2; K = -1: sqrt((A + 2 pi - P)(A + 2 pi + P)) - I
    double cauchy_schwarz_slack = 0.0;

    bool horocycle_ok = true;
    Verdict verdict = Verdict::InvalidInput;
    std::string diagnostic;
};

/// Full audit. Integrals are repeated on a doubled phase grid and a curve
/// rebuilt at twice the resolution to report self-consistency deltas.
/// K = -1 curves with min k <= 1 and flat curves get the invalid-input verdict.
AuditReport rigidity_audit(const BoundaryCurve& curve, PhaseGrid grid = {}, int threads = 1);

}  // namespace curvbill
