#include "rodfield/inverse.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace rodfield {

using std::numbers::pi;

std::vector<Vec2> make_sensor_circle(const Vec2& center, double radius, int count) {
    if (count < 1) throw ValidationError("sensor_count", "need at least one sensor");
    if (!(radius > 0.0)) throw ValidationError("sensor_radius", "must be > 0");
    std::vector<Vec2> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double t = 2.0 * pi * k / count;
        pts.push_back(center + radius * Vec2(std::cos(t), std::sin(t)));
    }
    return pts;
}

void check_sensor_placement(const RodSpec& spec, const std::vector<Vec2>& points) {
    for (std::size_t k = 0; k < points.size(); ++k) {
        const double d = signed_distance(spec, points[k]);
        if (d < 2.0 * spec.delta)
            throw ValidationError("sensors", "sensor " + std::to_string(k) + " is within 2*delta of the rod");
    }
}

ForwardModel parse_forward_model(const std::string& name) {
    if (name == "bem") return ForwardModel::bem;
    if (name == "asymptotic") return ForwardModel::asymptotic;
    throw ValidationError("model", "expected bem or asymptotic, got '" + name + "'");
}

const char* model_name(ForwardModel m) { return m == ForwardModel::bem ? "bem" : "asymptotic"; }

SensorSet simulate_measurements(const RodSpec& spec, const HarmonicBackground& h, const Vec2& center, double radius,
                                const std::vector<Vec2>& points, const SimulationOptions& opts) {
    spec.validate();
    check_sensor_placement(spec, points);
    if (opts.noise_rms < 0.0) throw ValidationError("noise_rms", "must be >= 0");

    SensorSet s;
    s.center = center;
    s.radius = radius;
    s.points = points;
    s.background = h;
    s.values.resize(points.size());
    if (opts.source == ForwardModel::bem) {
        const ForwardSolution sol = solve_forward(spec, h, auto_resolution(spec, opts.nodes_per_delta));
        for (std::size_t k = 0; k < points.size(); ++k) s.values[k] = eval_u(sol, points[k]).value;
    } else {
        const AsymptoticModel model = AsymptoticModel::from_spec(spec, h);
        for (std::size_t k = 0; k < points.size(); ++k) s.values[k] = asym_u_linear(model, points[k]);
    }
    if (opts.noise_rms > 0.0) {
        std::mt19937_64 rng(opts.seed);
        std::normal_distribution<double> noise(0.0, opts.noise_rms);
        for (double& v : s.values) v += noise(rng);
    }
    return s;
}

double model_value(const FitParams& p, const HarmonicBackground& h, const Vec2& x) {
    const Mat2 rot = rotation(p.angle);
    const Vec2 a = rot.transpose() * h.uniform_gradient();
    const LinearShapes s = linear_shapes(p.length, rot.transpose() * (x - p.center));
    return h.value(x) + p.strength * a.x() * s.longitudinal + p.transverse_strength * a.y() * s.transverse;
}

// Reversing the axis direction swaps P and Q, which flips the sign of both
// shapes; a half turn of the frame leaves the model unchanged.
FitParams canonicalize(FitParams p) {
    if (p.length < 0.0) {
        p.length = -p.length;
        p.strength = -p.strength;
        p.transverse_strength = -p.transverse_strength;
    }
    p.angle = std::fmod(p.angle, pi);
    if (p.angle < 0.0) p.angle += pi;
    if (p.angle >= pi) p.angle = 0.0;
    return p;
}

namespace {

using Geom = Eigen::Vector4d;  // center x, center y, angle, length

struct Projection {
    Eigen::VectorXd residual;
    double strength = 0.0;
    double transverse = 0.0;
};

class Problem {
public:
    Problem(const SensorSet& data, bool free_transverse) : data_(data), free_(free_transverse) {
        const auto n = static_cast<long>(data.points.size());
        target_.resize(n);
        for (long k = 0; k < n; ++k) {
            const auto i = static_cast<std::size_t>(k);
            target_[k] = data.values[i] - data.background.value(data.points[i]);
        }
    }

    Projection project(const Geom& g) const {
        const auto n = target_.size();
        const Mat2 rot = rotation(g[2]);
        const Vec2 a = rot.transpose() * data_.background.uniform_gradient();
        Eigen::MatrixXd basis(n, free_ ? 2 : 1);
#pragma omp parallel for schedule(static)
        for (long k = 0; k < n; ++k) {
            const Vec2 xi = rot.transpose() * (data_.points[static_cast<std::size_t>(k)] - Vec2(g[0], g[1]));
            const LinearShapes s = linear_shapes(g[3], xi);
            if (free_) {
                basis(k, 0) = a.x() * s.longitudinal;
                basis(k, 1) = a.y() * s.transverse;
            } else {
                basis(k, 0) = a.x() * s.longitudinal + a.y() * s.transverse;
            }
        }
        const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(target_);
        Projection p;
        p.residual = basis * coef - target_;
        p.strength = coef[0];
        p.transverse = free_ ? coef[1] : coef[0];
        return p;
    }

    // Both endpoints strictly inside the sensor circle (no constraint if the
    // circle is unknown).
    bool feasible(const Geom& g) const {
        if (!(data_.radius > 0.0)) return true;
        const Vec2 half = 0.5 * g[3] * Vec2(std::cos(g[2]), std::sin(g[2]));
        const Vec2 c = Vec2(g[0], g[1]) - data_.center;
        return (c + half).norm() < data_.radius && (c - half).norm() < data_.radius;
    }

    Eigen::MatrixXd jacobian(const Geom& g) const {
        Eigen::MatrixXd j(target_.size(), 4);
        for (int k = 0; k < 4; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(g[k]));
            Geom up = g, dn = g;
            up[k] += h;
            dn[k] -= h;
            j.col(k) = (project(up).residual - project(dn).residual) / (2.0 * h);
        }
        return j;
    }

private:
    const SensorSet& data_;
    bool free_;
    Eigen::VectorXd target_;
};

double rms(const Eigen::VectorXd& r) { return r.size() ? std::sqrt(r.squaredNorm() / r.size()) : 0.0; }

void check_fit_data(const SensorSet& data) {
    if (data.points.size() != data.values.size()) throw ValidationError("values", "one value per sensor required");
    if (data.points.size() < 6) throw ValidationError("sensors", "need at least 6 sensors");
    if (!data.background.is_linear()) throw ValidationError("background", "fit needs a uniform background field");
    if (data.background.uniform_gradient().norm() == 0.0)
        throw IdentifiabilityError("background field a = 0: the data carry no information about the rod");
}

}  // namespace

FitResult fit_rod(const SensorSet& data, const FitParams& init, const FitOptions& opts) {
    check_fit_data(data);
    if (!(init.length != 0.0)) throw ValidationError("init_L", "initial length must be nonzero");
    const Problem problem(data, opts.free_transverse);
    const double tol = opts.tolerance;

    Geom g(init.center.x(), init.center.y(), init.angle, init.length);
    if (!problem.feasible(g)) throw ValidationError("init", "initial rod must lie inside the sensor circle");
    Projection cur = problem.project(g);
    double cost = cur.residual.squaredNorm();
    std::vector<double> history{rms(cur.residual)};
    double mu = 1e-3;
    bool converged = cost == 0.0;
    int it = 0;

    while (!converged && it < opts.max_iterations) {
        ++it;
        const Eigen::MatrixXd j = problem.jacobian(g);
        const Eigen::Matrix4d a = j.transpose() * j;
        const Eigen::Vector4d grad = j.transpose() * cur.residual;
        const double floor = 1e-12 * std::max(a.diagonal().maxCoeff(), 1e-300);

        bool accepted = false;
        while (!accepted) {
            Eigen::Matrix4d damped = a;
            for (int k = 0; k < 4; ++k) damped(k, k) += mu * std::max(a(k, k), floor);
            const Geom step = damped.ldlt().solve(-grad);
            const bool tiny = step.norm() <= tol * (g.norm() + tol);
            const Geom trial = g + step;
            Projection next;
            double cost_trial = std::numeric_limits<double>::infinity();
            if (problem.feasible(trial)) {
                next = problem.project(trial);
                cost_trial = next.residual.squaredNorm();
            }

            if (std::isfinite(cost_trial) && cost_trial < cost) {
                const double drop = (cost - cost_trial) / cost;
                g = trial;
                cur = std::move(next);
                cost = cost_trial;
                history.push_back(rms(cur.residual));
                mu = std::max(mu / 3.0, 1e-15);
                accepted = true;
                if ((tiny && drop < tol) || cost == 0.0) converged = true;
            } else {
                // No decrease even for a step at rounding level: stationary.
                if (tiny) {
                    converged = true;
                    break;
                }
                mu *= 4.0;
                if (mu > 1e16) break;
            }
        }
        if (!accepted && !converged) break;
    }

    FitResult r;
    r.params = canonicalize({Vec2(g[0], g[1]), g[2], g[3], cur.strength, cur.transverse});
    const Vec2 e1(std::cos(r.params.angle), std::sin(r.params.angle));
    r.p_hat = r.params.center - 0.5 * r.params.length * e1;
    r.q_hat = r.params.center + 0.5 * r.params.length * e1;
    r.residual = rms(cur.residual);
    r.iterations = it;
    r.converged = converged;
    r.residual_history = std::move(history);
    return r;
}

FitParams initial_guess(const SensorSet& data) {
    check_fit_data(data);
    Vec2 centroid = Vec2::Zero();
    double total = 0.0;
    for (std::size_t k = 0; k < data.points.size(); ++k) {
        const double w = std::abs(data.values[k] - data.background.value(data.points[k]));
        centroid += w * data.points[k];
        total += w;
    }
    FitParams p;
    p.center = total > 0.0 ? Vec2(centroid / total) : data.center;
    p.angle = 0.0;
    p.length = data.radius > 0.0 ? 0.5 * data.radius : 1.0;
    return p;
}

FitResult fit_rod_multistart(const SensorSet& data, const FitOptions& opts) {
    const FitParams base = initial_guess(data);
    FitResult best;
    bool have = false;
    for (int k = 0; k < 4; ++k) {
        FitParams start = base;
        start.angle = k * pi / 4.0;
        FitResult r = fit_rod(data, start, opts);
        if (!have || r.residual < best.residual) {
            best = std::move(r);
            have = true;
        }
    }
    return best;
}

double distinguishability_gap(const RodSpec& spec1, const RodSpec& spec2, const HarmonicBackground& h,
                              const std::vector<Vec2>& points, double nodes_per_delta) {
    check_sensor_placement(spec1, points);
    check_sensor_placement(spec2, points);
    const ForwardSolution s1 = solve_forward(spec1, h, auto_resolution(spec1, nodes_per_delta));
    const ForwardSolution s2 = solve_forward(spec2, h, auto_resolution(spec2, nodes_per_delta));
    double gap = 0.0;
    for (const Vec2& x : points) gap = std::max(gap, std::abs(eval_u(s1, x).value - eval_u(s2, x).value));
    return gap;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

Measurements read_measurements(std::istream& in) {
    Measurements m;
    std::string line;
    int lineno = 0;
    bool seen_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!seen_data && !fields.empty() && trim(fields[0]) == "x1") {
            if (fields.size() != 3 || trim(fields[1]) != "x2" || trim(fields[2]) != "u")
                throw ParseError(lineno, "header must be x1,x2,u");
            seen_data = true;
            continue;
        }
        if (fields.size() != 3) throw ParseError(lineno, "expected 3 fields, got " + std::to_string(fields.size()));
        double v[3];
        for (int k = 0; k < 3; ++k)
            if (!parse_double(fields[static_cast<std::size_t>(k)], v[k]) || !std::isfinite(v[k]))
                throw ParseError(lineno, "not a finite number: '" + trim(fields[static_cast<std::size_t>(k)]) + "'");
        m.points.emplace_back(v[0], v[1]);
        m.values.push_back(v[2]);
        seen_data = true;
    }
    if (m.points.empty()) throw ParseError(lineno, "no measurement rows");
    return m;
}

void write_measurements(std::ostream& out, const std::vector<Vec2>& points, const std::vector<double>& values) {
    const auto old = out.precision(17);
    out << "x1,x2,u\n";
    for (std::size_t k = 0; k < points.size(); ++k)
        out << points[k].x() << ',' << points[k].y() << ',' << values[k] << '\n';
    out.precision(old);
}

}  // namespace rodfield
