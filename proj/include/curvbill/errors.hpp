#pragma once

#include <stdexcept>
#include <string>

namespace curvbill {

/// Bad input: violated precondition, malformed config, or a curve spec that
/// does not describe an admissible domain.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot finish with the required accuracy.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Phase point too close to |Phi| = 1. `index` is the orbit step at which the
/// grazing state was reached (0 for a single step).
class GrazingError : public NumericalError {
public:
    GrazingError(const std::string& what, int index)
        : NumericalError(what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

/// Hyperbolic curve that is not convex with respect to horocycles (min k <= 1).
class HorocycleConvexityError : public ValidationError {
public:
    HorocycleConvexityError(const std::string& what, double min_curvature)
        : ValidationError(what), min_curvature_(min_curvature) {}
    double min_curvature() const noexcept { return min_curvature_; }

private:
    double min_curvature_;
};

}  // namespace curvbill
