#include "rodfield/background.hpp"

namespace rodfield {

HarmonicBackground HarmonicBackground::linear(const Vec2& a) {
    HarmonicBackground h;
    h.kind_ = Kind::linear;
    h.c_ = {0.0, a.x(), a.y(), 0.0, 0.0};
    return h;
}

HarmonicBackground HarmonicBackground::polynomial(const std::array<double, 5>& coefficients) {
    HarmonicBackground h;
    h.c_ = coefficients;
    h.kind_ = (coefficients[3] == 0.0 && coefficients[4] == 0.0) ? Kind::linear : Kind::harmonic_poly;
    return h;
}

bool HarmonicBackground::trivial() const {
    return c_[1] == 0.0 && c_[2] == 0.0 && c_[3] == 0.0 && c_[4] == 0.0;
}

double HarmonicBackground::value(const Vec2& x) const {
    const double x1 = x.x();
    const double x2 = x.y();
    return c_[0] + c_[1] * x1 + c_[2] * x2 + c_[3] * (x1 * x1 - x2 * x2) + c_[4] * x1 * x2;
}

Vec2 HarmonicBackground::gradient(const Vec2& x) const {
    return {c_[1] + 2.0 * c_[3] * x.x() + c_[4] * x.y(), c_[2] - 2.0 * c_[3] * x.y() + c_[4] * x.x()};
}

Mat2 HarmonicBackground::hessian() const {
    Mat2 h;
    h << 2.0 * c_[3], c_[4], c_[4], -2.0 * c_[3];
    return h;
}

}  // namespace rodfield
