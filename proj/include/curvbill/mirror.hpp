#pragma once

// Focusing distances along chords and the mirror equation
//
//   (Y'/Y)(a_n) + (Y'/Y)(L_{n-1} - a_{n-1}) = 2 k(x_n) / sin phi_n,
//
// where a_n is the distance from x_n to the zero of the Jacobi field along
// chord n, fixed by Y(a)/Y(L - a) = sin phi_0 / (nu_1 sin phi_1).

#include "curvbill/billiard.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace curvbill {

struct CausticDistance {
    double a;
    double L;
    int iterations;
    double residual;      // |Y(a)/Y(L-a) - target| / target
    bool certificate_ok;  // derivative Y(L)/Y(L-a)^2 > 0 at every midpoint
};

/// Bisection on (0, L) for Y(a)/Y(L - a) = sin phi0 / (nu1 sin phi1).
/// Throws ValidationError on L <= 0 (L >= pi for K = +1), angles outside
/// (0, pi) or nu1 <= 0.
CausticDistance solve_caustic_distance(double L, double phi0, double phi1, double nu1, Curvature tag);

struct MirrorSample {
    int bounce;                      // vertex index n of the configuration
    double a;                        // caustic distance of chord n (NaN if unknown)
    double L;                        // length of chord n
    std::optional<double> residual;  // undefined when a_n or a_{n-1} is unknown
};

/// One sample per chord of the orbit; nu1[n] is the cocycle value at
/// orbit.points[n] (nullopt where the estimate did not converge). The
/// residual at n compares chords n-1 and n, so bounce 0 has none.
std::vector<MirrorSample> mirror_residual(const BoundaryCurve& curve, const Configuration& orbit,
                                          const std::vector<std::optional<double>>& nu1);

/// Residuals of Y(a) = Y(L) Y'(L-a) - Y'(L) Y(L-a) and
/// Y(L-a) = Y(L) Y'(a) - Y(a) Y'(L), each divided by max(1, size of its products).
std::pair<double, double> wronskian_identities_residual(double L, double a, Curvature tag);

}  // namespace curvbill
