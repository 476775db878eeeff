#include "rodfield/asymptotics.hpp"

#include <numbers>

#include "rodfield/quadrature.hpp"
#include "rodfield/solver.hpp"

namespace rodfield {

using std::numbers::pi;

AsymptoticModel AsymptoticModel::from_spec(const RodSpec& spec, const HarmonicBackground& h) {
    spec.validate();
    AsymptoticModel m;
    m.length = spec.length;
    m.delta = spec.delta;
    m.lambda = lambda_of_sigma(spec.sigma0);
    m.center = spec.center;
    m.angle = spec.angle;
    m.background = h;
    return m;
}

Vec2 AsymptoticModel::local(const Vec2& x) const { return rotation(angle).transpose() * (x - center); }
Vec2 AsymptoticModel::world_vector(const Vec2& v) const { return rotation(angle) * v; }

CapPoints cap_points(double length) { return {{-0.5 * length, 0.0}, {0.5 * length, 0.0}}; }

namespace {

struct CapDistances {
    Vec2 xp;  // x - P
    Vec2 xq;  // x - Q
    double rp2;
    double rq2;
};

CapDistances cap_distances(const Vec2& x, double length) {
    const CapPoints caps = cap_points(length);
    CapDistances d{x - caps.p, x - caps.q, 0.0, 0.0};
    d.rp2 = d.xp.squaredNorm();
    d.rq2 = d.xq.squaredNorm();
    if (d.rp2 == 0.0 || d.rq2 == 0.0) throw SingularPointError("evaluation point coincides with a cap centre");
    return d;
}

// Angle subtended by the segment PQ at x; equals
// atan((L/2-x1)/x2) + atan((L/2+x1)/x2) off the axis.
double subtended_angle(const Vec2& x, double length) {
    const double half = 0.5 * length;
    return std::atan2(x.y(), x.x() - half) - std::atan2(x.y(), x.x() + half);
}

Vec2 local_uniform_field(const AsymptoticModel& model) {
    if (!model.background.is_linear())
        throw std::invalid_argument("asymptotic linear model requires a uniform background field");
    return rotation(model.angle).transpose() * model.background.uniform_gradient();
}

}  // namespace

std::pair<double, double> f1_f2(const Vec2& x, double length) {
    const CapDistances d = cap_distances(x, length);
    const double f1 = x.y() / d.rq2 - x.y() / d.rp2;
    const double f2 = d.xq.x() / d.rq2 - d.xp.x() / d.rp2;
    return {f1, f2};
}

double localization_factor(const Vec2& x, double length) {
    const CapDistances d = cap_distances(x, length);
    const double rp = std::sqrt(d.rp2);
    const double rq = std::sqrt(d.rq2);
    const double inv = 1.0 / rq - 1.0 / rp;
    return inv * inv + 2.0 / (rp * rq) * (1.0 - d.xp.dot(d.xq) / (rp * rq));
}

LinearShapes linear_shapes(double length, const Vec2& xi) {
    const CapDistances d = cap_distances(xi, length);
    return {std::log(d.rq2 / d.rp2) / (2.0 * pi), subtended_angle(xi, length) / pi};
}

double linear_perturbation(const Vec2& a, double length, double strength, const Vec2& xi) {
    const LinearShapes s = linear_shapes(length, xi);
    return strength * (a.x() * s.longitudinal + a.y() * s.transverse);
}

double asym_u_linear(const AsymptoticModel& model, const Vec2& x) {
    const Vec2 a = local_uniform_field(model);
    return model.background.value(x) + linear_perturbation(a, model.length, model.strength(), model.local(x));
}

Vec2 asym_grad_linear(const AsymptoticModel& model, const Vec2& x) {
    const Vec2 a = local_uniform_field(model);
    const auto [f1, f2] = f1_f2(model.local(x), model.length);
    const double c = model.strength();
    const Vec2 pert(f2 * a.x() - f1 * a.y(), f1 * a.x() + f2 * a.y());
    return model.background.uniform_gradient() + c / pi * model.world_vector(pert);
}

double perturbed_field_energy(const AsymptoticModel& model, const Vec2& x) {
    const double c = model.strength();
    const double a2 = model.background.uniform_gradient().squaredNorm();
    const auto [f1, f2] = f1_f2(model.local(x), model.length);
    return c * c / (pi * pi) * a2 * (f1 * f1 + f2 * f2);
}

AsymptoticValue asym_u_general(const AsymptoticModel& model, const Vec2& x, int n_quad) {
    if (n_quad < 16) throw ValidationError("n_quad", "need at least 16 quadrature points");
    const double half = 0.5 * model.length;
    const Vec2 xi = model.local(x);
    const CapDistances d = cap_distances(xi, model.length);
    const double c = model.strength();
    const Mat2 rot = rotation(model.angle);
    const Vec2 e1 = rot.col(0);
    const Vec2 e2 = rot.col(1);
    const HarmonicBackground& h = model.background;
    auto axis_point = [&](double y1) -> Vec2 { return model.center + y1 * e1; };

    AsymptoticValue out;
    out.value = h.value(x);
    out.underresolved = std::abs(xi.y()) < model.length / n_quad;

    if (model.length > 0.0) {
        const QuadratureRule rule = graded_rule(-half, half, xi.x(), std::abs(xi.y()), n_quad);
        const double anchor = (xi.x() + half) * (xi.x() + half) + xi.y() * xi.y();
        double log_term = 0.0;
        double poisson_term = 0.0;
        const double curvature = e2.dot(h.hessian() * e2);
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double y1 = rule.nodes[k];
            const double r2 = (xi.x() - y1) * (xi.x() - y1) + xi.y() * xi.y();
            if (curvature != 0.0) log_term += rule.weights[k] * std::log(r2 / anchor) * curvature;
            if (xi.y() != 0.0) poisson_term += rule.weights[k] * xi.y() / r2 * h.gradient(axis_point(y1)).dot(e2);
        }
        out.value += c / (2.0 * pi) * log_term + c / pi * poisson_term;
    }
    const double end_slope = h.gradient(axis_point(half)).dot(e1);
    out.value += c / (2.0 * pi) * std::log(d.rq2 / d.rp2) * end_slope;
    return out;
}

double a_delta_apply(const std::function<double(double)>& psi, double delta, double length, double x1, int n_quad) {
    if (!(delta > 0.0)) throw ValidationError("delta", "must be > 0");
    if (!(length > 0.0)) throw ValidationError("L", "must be > 0");
    const double half = 0.5 * length;
    const QuadratureRule rule = graded_rule(-half, half, x1, 2.0 * delta, n_quad);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double t = x1 - rule.nodes[k];
        s += rule.weights[k] * delta / (t * t + 4.0 * delta * delta) * psi(rule.nodes[k]);
    }
    return s / pi;
}

}  // namespace rodfield
