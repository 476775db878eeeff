#pragma once

#include <functional>
#include <vector>

namespace rodfield {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre rule on [a, b] for integrands with complex
/// singularities at y = peak +- i*width (Poisson / log kernels). Panels are
/// geometrically graded toward `peak` (if it lies inside) and toward both
/// endpoints, so that each panel is no wider than its distance to the
/// singularity. `points_per_panel` Gauss nodes go on every panel.
QuadratureRule graded_rule(double a, double b, double peak, double width, int points_per_panel);

}  // namespace rodfield
