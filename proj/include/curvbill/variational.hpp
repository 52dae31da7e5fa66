#pragma once

// Discrete Jacobi fields along billiard configurations.
//
//   b_{n-1} xi_{n-1} + a_n xi_n + b_n xi_{n+1} = 0,
//   a_n = L22(x_{n-1}, x_n) + L11(x_n, x_{n+1}),  b_n = L12(x_n, x_{n+1}) > 0.
//
// The same coefficients form the symmetric tridiagonal second variation of
// the action sum_n L(x_n, x_{n+1}) on a window with fixed endpoints.

#include "curvbill/billiard.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace curvbill {

/// Coefficients on the window of configuration indices [first, last].
/// b covers indices first..last-1, a covers the interior first+1..last-1.
struct JacobiSegment {
    int first = 0;
    int last = 0;
    std::vector<double> a;
    std::vector<double> b;

    double a_at(int n) const { return a[static_cast<std::size_t>(n - first - 1)]; }
    double b_at(int n) const { return b[static_cast<std::size_t>(n - first)]; }
    int interior_size() const noexcept { return last - first - 1; }
};

struct JacobiField {
    int first = 0;
    std::vector<double> xi;  // xi[k] belongs to index first + k

    double at(int n) const { return xi[static_cast<std::size_t>(n - first)]; }
};

/// Throws ValidationError when [i, j] is not inside the configuration and
/// NumericalError if some b_n <= 0.
JacobiSegment jacobi_coefficients(const Configuration& config, int i, int j);

/// Largest |b_{n-1} xi_{n-1} + a_n xi_n + b_n xi_{n+1}| / (|b_{n-1} xi_{n-1}| + |a_n xi_n| + |b_n xi_{n+1}|)
/// over interior indices covered by the field.
double jacobi_residual(const JacobiSegment& seg, const JacobiField& field);

struct ConjugatePair {
    int i;
    int k;
    JacobiField witness;  // vanishes at i, generalized zero at k
};

/// Scans every start i in the window: solves forward from xi_i = 0,
/// xi_{i+1} = 1 and reports the first generalized zero (|xi_k| <= 1e-9 max|xi|
/// or a sign change between k-1 and k). nullopt when the window is conjugate free.
std::optional<ConjugatePair> conjugate_point_test(const JacobiSegment& seg);

enum class Definiteness { NegativeDefinite, SemidefiniteDegenerate, Indefinite };

const char* to_string(Definiteness d) noexcept;

struct DefinitenessReport {
    Definiteness kind;
    int negative = 0;
    int positive = 0;
    int zero = 0;
    std::vector<double> pivots;
};

/// Inertia of the interior second-variation matrix (diagonal a, off-diagonal b)
/// by an unpivoted LDL^T factorization. A pivot below 1e-9 of the coefficient
/// scale stops the factorization; it is reported as degenerate unless a
/// positive pivot was already seen. Requires at least one interior point.
DefinitenessReport second_variation_definiteness(const JacobiSegment& seg);

enum class CocycleStatus { Converged, NotConverged, ConjugatePoints };

const char* to_string(CocycleStatus s) noexcept;

struct CocycleEstimate {
    double nu1 = 0.0;
    int window = 0;  // largest window used
    bool converged = false;
    CocycleStatus status = CocycleStatus::NotConverged;
    std::vector<std::pair<int, double>> history;  // (N, xi_1 of the window-N solve)
    int conjugate_index = -1;                     // first interior xi <= 0 when status is ConjugatePoints
    std::vector<double> field;                    // stable field estimate xi_0 = 1, xi_1 = nu1, ...
};

inline constexpr double kCocycleTolerance = 1e-8;

/// Stable positive Jacobi field at config.points[start] by doubling windows
/// N = 4, 8, ... <= max_window: solve the Jacobi equation with xi_0 = 1,
/// xi_N = 0. Convergence is declared when two successive xi_1 values agree to
/// 1e-8, or when their Richardson extrapolates 2 xi_1^(2N) - xi_1^(N) do
/// (which removes the O(1/N) bias of parabolic orbits).
CocycleEstimate hopf_cocycle(const Configuration& config, int start, int max_window);

/// Computes the forward orbit of length max_window from p, then as above.
CocycleEstimate hopf_cocycle(const BoundaryCurve& curve, PhasePoint p, int max_window);

/// Slope -(L11 + L12 nu1) of the invariant line at p in (x, Phi) coordinates.
double monotone_slope(const BoundaryCurve& curve, PhasePoint p, double nu1);

}  // namespace curvbill
