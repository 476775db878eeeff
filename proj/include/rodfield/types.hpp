#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rodfield {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Raised when an input object violates its documented invariants.
/// `field()` names the offending parameter (e.g. "delta", "sigma0").
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Linear solve failure. Carries the reciprocal condition estimate.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double rcond)
        : std::runtime_error(what), rcond_(rcond) {}

    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

/// Evaluation requested exactly at a cap centre, where the closed-form
/// expressions blow up.
class SingularPointError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Inversion with data that carries no information about the rod.
class IdentifiabilityError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Mat2 rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

}  // namespace rodfield
