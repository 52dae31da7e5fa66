#pragma once

// Billiard ball map on the phase cylinder (x mod P, Phi = cos phi), chord
// geometry and the second derivatives of the generating function
// L(x, y) = dist(gamma(x), gamma(y)).
//
// The boundary is oriented counterclockwise (increasing polar angle). phi is
// the angle at gamma(x) between the outgoing chord and the tangent, psi the
// angle at gamma(y) between the incoming chord and the tangent; both lie in
// (0, pi) and Phi = -L_1(x, y), Psi = L_2(x, y).

#include "curvbill/curve.hpp"

#include <vector>

namespace curvbill {

inline constexpr double kGrazingEps = 1e-6;

struct PhasePoint {
    double x;    // arc length, in [0, P)
    double Phi;  // cos phi
};

struct ChordData {
    double x;
    double y;
    double theta_x;  // polar angles of the endpoints, theta_x <= theta_y < theta_x + 2 pi
    double theta_y;
    double L;
    double phi;
    double psi;
    double cos_phi;
    double sin_phi;
    double cos_psi;
    double sin_psi;
    double L11;
    double L12;
    double L22;
};

struct Configuration {
    std::vector<PhasePoint> points;  // points.size() == chords.size() + 1
    std::vector<ChordData> chords;   // chords[n] joins points[n] to points[n + 1]

    std::size_t bounces() const noexcept { return chords.size(); }
};

/// Chord from gamma(theta_x) to gamma(theta_y), theta_x < theta_y < theta_x + 2 pi.
ChordData chord_theta(const BoundaryCurve& curve, double theta_x, double theta_y);

/// Chord between boundary points with arc-length parameters x != y (mod P).
/// Throws ValidationError for coincident points, NumericalError for sphere
/// chords of length >= pi.
ChordData chord(const BoundaryCurve& curve, double x, double y);

struct ShotResult {
    ChordData chord;
    int iterations;
};

/// Chord leaving gamma(theta_x) at angle phi in (0, pi) with the tangent.
/// Solves phi(x, y) = phi with a bracketed Newton/bisection hybrid in the
/// polar angle of y; no grazing restriction, so quadratures can use it.
ShotResult shoot(const BoundaryCurve& curve, double theta_x, double phi);

/// One application of the billiard map. Throws GrazingError when
/// |Phi| >= 1 - kGrazingEps.
PhasePoint billiard_step(const BoundaryCurve& curve, PhasePoint p);

/// n applications of the map with all chord data recorded. A grazing iterate
/// aborts with GrazingError carrying the step index.
Configuration orbit(const BoundaryCurve& curve, PhasePoint p, int n);

/// Arc length travelled along the boundary by a chord, in (0, P).
double boundary_advance(const BoundaryCurve& curve, const ChordData& c);

/// max_n |psi_n - phi_{n+1}| over interior vertices.
double reflection_law_residual(const Configuration& config);

/// max_n |L_2(x_{n-1}, x_n) + L_1(x_n, x_{n+1})| over interior vertices.
double euler_lagrange_residual(const Configuration& config);

}  // namespace curvbill
