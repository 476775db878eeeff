#include "rodfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rodfield {

double QuadratureRule::integrate(const std::function<double(double)>& f) const {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * f(nodes[k]);
    return s;
}

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n from the Chebyshev-like initial guess; symmetric pairs.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace {

// Breakpoints from `from` toward `to`, doubling panel widths starting at w0.
void grade(std::vector<double>& pts, double from, double to, double w0) {
    const double len = std::abs(to - from);
    const double dir = to > from ? 1.0 : -1.0;
    double off = w0;
    while (off < len) {
        pts.push_back(from + dir * off);
        off = 2.0 * off + w0;  // widths w0, 2w0, 4w0, ...
    }
}

}  // namespace

QuadratureRule graded_rule(double a, double b, double peak, double width, int points_per_panel) {
    if (!(b > a)) throw std::invalid_argument("graded_rule: need b > a");
    const double floor_w = 1e-14 * (b - a);
    auto dist = [&](double y) { return std::max(std::hypot(y - peak, width), floor_w); };

    std::vector<double> anchors{a, b};
    if (peak > a && peak < b) anchors.push_back(peak);
    std::sort(anchors.begin(), anchors.end());

    std::vector<double> pts = anchors;
    for (std::size_t k = 0; k + 1 < anchors.size(); ++k) {
        const double l = anchors[k];
        const double r = anchors[k + 1];
        const double mid = 0.5 * (l + r);
        pts.push_back(mid);
        grade(pts, l, mid, dist(l));
        grade(pts, r, mid, dist(r));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const QuadratureRule base = gauss_legendre(points_per_panel);
    QuadratureRule rule;
    rule.nodes.reserve(pts.size() * base.nodes.size());
    rule.weights.reserve(pts.size() * base.nodes.size());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double c = 0.5 * (pts[k] + pts[k + 1]);
        const double h = 0.5 * (pts[k + 1] - pts[k]);
        for (std::size_t j = 0; j < base.nodes.size(); ++j) {
            rule.nodes.push_back(c + h * base.nodes[j]);
            rule.weights.push_back(h * base.weights[j]);
        }
    }
    return rule;
}

}  // namespace rodfield
