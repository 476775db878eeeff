#pragma once

#include <array>

#include "rodfield/types.hpp"

namespace rodfield {

/// Background potential H, a harmonic polynomial of degree <= 2:
///   H(x) = c0 + c1 x1 + c2 x2 + c3 (x1^2 - x2^2) + c4 x1 x2.
/// The uniform field H = a.x is the linear special case.
class HarmonicBackground {
public:
    enum class Kind { linear, harmonic_poly };

    HarmonicBackground() = default;

    static HarmonicBackground linear(const Vec2& a);
    static HarmonicBackground polynomial(const std::array<double, 5>& coefficients);

    Kind kind() const { return kind_; }
    bool is_linear() const { return kind_ == Kind::linear; }
    const std::array<double, 5>& coefficients() const { return c_; }
    /// Uniform part (c1, c2) = a for linear backgrounds.
    Vec2 uniform_gradient() const { return {c_[1], c_[2]}; }
    bool trivial() const;

    double value(const Vec2& x) const;
    Vec2 gradient(const Vec2& x) const;
    Mat2 hessian() const;
    Mat2 hessian(const Vec2&) const { return hessian(); }

private:
    Kind kind_ = Kind::linear;
    std::array<double, 5> c_{0.0, 1.0, 0.0, 0.0, 0.0};
};

}  // namespace rodfield
