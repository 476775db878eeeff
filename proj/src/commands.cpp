#include "rodfield/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "rodfield/validation.hpp"

namespace rodfield {

using json = nlohmann::ordered_json;

namespace {

struct GridSample {
    double value;
    Vec2 gradient;
    bool flag;
};

GridSample asymptotic_sample(const AsymptoticModel& model, const RodSpec& rod, int n_quad, const Vec2& x) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        if (model.background.is_linear())
            return {asym_u_linear(model, x), asym_grad_linear(model, x), inside_rod(rod, x)};
        const AsymptoticValue v = asym_u_general(model, x, n_quad);
        const double h = 1e-6 * std::max(1.0, x.norm());
        Vec2 g;
        for (int k = 0; k < 2; ++k) {
            Vec2 e = Vec2::Zero();
            e[k] = h;
            g[k] = (asym_u_general(model, x + e, n_quad).value - asym_u_general(model, x - e, n_quad).value) / (2.0 * h);
        }
        return {v.value, g, v.underresolved || inside_rod(rod, x)};
    } catch (const SingularPointError&) {
        return {nan, Vec2(nan, nan), true};
    }
}

std::vector<GridSample> sample_grid(const RunConfig& cfg, ForwardModel model, const std::vector<Vec2>& pts) {
    std::vector<GridSample> out(pts.size());
    if (model == ForwardModel::bem) {
        const ForwardSolution sol = solve_forward(cfg.rod, cfg.background, cfg.resolution());
        const std::vector<FieldValue> f = eval_field(sol, pts);
        for (std::size_t k = 0; k < pts.size(); ++k) out[k] = {f[k].value, f[k].gradient, f[k].near_boundary};
    } else {
        const AsymptoticModel m = AsymptoticModel::from_spec(cfg.rod, cfg.background);
        const auto n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(static)
        for (long k = 0; k < n; ++k) {
            const auto i = static_cast<std::size_t>(k);
            out[i] = asymptotic_sample(m, cfg.rod, cfg.n_quad, pts[i]);
        }
    }
    return out;
}

void write_field_rows(std::ostream& out, const std::vector<Vec2>& pts, const std::vector<GridSample>& s) {
    const auto old = out.precision(17);
    out << "x1,x2,u,ux,uy,near_boundary_flag\n";
    for (std::size_t k = 0; k < pts.size(); ++k)
        out << pts[k].x() << ',' << pts[k].y() << ',' << s[k].value << ',' << s[k].gradient.x() << ','
            << s[k].gradient.y() << ',' << (s[k].flag ? 1 : 0) << '\n';
    out.precision(old);
}

json vec_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

}  // namespace

int cmd_fieldmap(const RunConfig& cfg, ForwardModel model, std::ostream& out) {
    cfg.validate();
    const std::vector<Vec2> pts = cfg.grid.points();
    const std::vector<GridSample> s = sample_grid(cfg, model, pts);
    const auto old = out.precision(17);
    out << "x1,x2,abs_u_minus_h,abs_grad_u_minus_grad_h,near_flag\n";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double du = std::abs(s[k].value - cfg.background.value(pts[k]));
        const double dg = (s[k].gradient - cfg.background.gradient(pts[k])).norm();
        out << pts[k].x() << ',' << pts[k].y() << ',' << du << ',' << dg << ',' << (s[k].flag ? 1 : 0) << '\n';
    }
    out.precision(old);
    return exit_ok;
}

int cmd_forward(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const std::vector<Vec2> pts = cfg.grid.points();
    write_field_rows(out, pts, sample_grid(cfg, ForwardModel::bem, pts));
    return exit_ok;
}

int cmd_asymptotic(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (!(cfg.rod.length > 0.0)) throw ConfigError("L", 0, "the closed-form model needs L > 0");
    const std::vector<Vec2> pts = cfg.grid.points();
    write_field_rows(out, pts, sample_grid(cfg, ForwardModel::asymptotic, pts));
    return exit_ok;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    if (!(cfg.rod.length > 0.0)) throw ConfigError("L", 0, "compare needs L > 0: a disc has no closed-form rod model");
    const double max_delta = *std::max_element(cfg.deltas.begin(), cfg.deltas.end());
    if (cfg.probe_radius <= 0.5 * cfg.rod.length + 3.0 * max_delta)
        throw ConfigError("probe_radius", 0, "probe circle must clear the largest rod by 2*delta");

    json rows = json::array();
    double prev_ratio = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (double delta : cfg.deltas) {
        const auto t0 = std::chrono::steady_clock::now();
        RodSpec rod = cfg.rod;
        rod.delta = delta;
        const Resolution res = cfg.resolution_for(rod);
        const ForwardSolution sol = solve_forward(rod, cfg.background, res);
        const AsymptoticModel model = AsymptoticModel::from_spec(rod, cfg.background);
        double e = 0.0;
        for (int k = 0; k < cfg.probe_count; ++k) {
            const double t = 2.0 * std::numbers::pi * k / cfg.probe_count;
            const Vec2 x = rod.center + cfg.probe_radius * Vec2(std::cos(t), std::sin(t));
            const double ua = cfg.background.is_linear() ? asym_u_linear(model, x)
                                                         : asym_u_general(model, x, cfg.n_quad).value;
            e = std::max(e, std::abs(eval_u(sol, x).value - ua));
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const double ratio = e / delta;
        if (!(ratio < prev_ratio)) decreasing = false;
        prev_ratio = ratio;
        rows.push_back({{"delta", delta},
                        {"E", e},
                        {"E_over_delta", ratio},
                        {"n_cap", res.n_cap},
                        {"n_facade", res.n_facade},
                        {"nodes", sol.mesh.size()},
                        {"seconds", seconds}});
    }
    json report{{"L", cfg.rod.length},
                {"sigma0", cfg.rod.sigma0},
                {"probe_radius", cfg.probe_radius},
                {"probe_count", cfg.probe_count},
                {"rows", rows},
                {"E_over_delta_strictly_decreasing", decreasing}};
    out << report.dump(2) << '\n';
    return exit_ok;
}

int cmd_validate(const ValidateRequest& req, std::ostream& out) {
    ValidateOptions opts;
    opts.zero_weights = req.zero_weights;
    const ValidationReport report = run_validation(opts);
    print_report(out, report, req.verbose);
    return report.all_passed() ? exit_ok : exit_failure;
}

int cmd_invert(const RunConfig& cfg, const InvertRequest& req, std::ostream& out) {
    cfg.validate();
    SensorSet data;
    if (req.synthesize) {
        const std::vector<Vec2> pts = make_sensor_circle(cfg.sensors.center, cfg.sensors.radius, cfg.sensors.count);
        SimulationOptions sim;
        sim.noise_rms = cfg.noise_rms;
        sim.source = cfg.source;
        sim.seed = cfg.seed;
        sim.nodes_per_delta = cfg.nodes_per_delta;
        data = simulate_measurements(cfg.rod, cfg.background, cfg.sensors.center, cfg.sensors.radius, pts, sim);
        if (!req.data_file.empty()) {
            std::ofstream f(req.data_file);
            if (!f) throw std::ios_base::failure("cannot write data file '" + req.data_file + "'");
            write_measurements(f, data.points, data.values);
        }
    } else {
        if (req.data_file.empty()) throw std::ios_base::failure("no data file given (use --data PATH or --synthesize)");
        std::ifstream f(req.data_file);
        if (!f) throw std::ios_base::failure("cannot open data file '" + req.data_file + "'");
        const Measurements m = read_measurements(f);
        data.points = m.points;
        data.values = m.values;
        data.background = cfg.background;
        // The largest circle about the sensor centroid that keeps every sensor outside.
        Vec2 c = Vec2::Zero();
        for (const Vec2& p : m.points) c += p;
        c /= static_cast<double>(m.points.size());
        double r = std::numeric_limits<double>::infinity();
        for (const Vec2& p : m.points) r = std::min(r, (p - c).norm());
        data.center = c;
        data.radius = r;
    }

    FitOptions fo;
    fo.max_iterations = cfg.max_iter;
    fo.tolerance = cfg.tolerance;
    fo.free_transverse = cfg.free_transverse;
    const FitResult fit = cfg.has_init ? fit_rod(data, cfg.init, fo) : fit_rod_multistart(data, fo);

    json report{{"p_hat", vec_json(fit.p_hat)},
                {"q_hat", vec_json(fit.q_hat)},
                {"center", vec_json(fit.params.center)},
                {"angle", fit.params.angle},
                {"length", fit.params.length},
                {"strength", fit.params.strength},
                {"transverse_strength", fit.params.transverse_strength},
                {"residual", fit.residual},
                {"iterations", fit.iterations},
                {"converged", fit.converged},
                {"sensors", data.points.size()},
                {"residual_history", fit.residual_history}};
    if (req.synthesize) {
        const double c = cfg.rod.delta / (lambda_of_sigma(cfg.rod.sigma0) - 0.5);
        const double err = std::max((fit.p_hat - cfg.rod.world_p()).norm(), (fit.q_hat - cfg.rod.world_q()).norm());
        report["truth"] = {{"p", vec_json(cfg.rod.world_p())},
                           {"q", vec_json(cfg.rod.world_q())},
                           {"strength", c},
                           {"source", model_name(cfg.source)},
                           {"noise_rms", cfg.noise_rms},
                           {"seed", cfg.seed}};
        report["endpoint_error"] = err;
        report["strength_relative_error"] = std::abs(fit.params.strength - c) / std::abs(c);
    }
    out << report.dump(2) << '\n';
    return fit.converged ? exit_ok : exit_failure;
}

}  // namespace rodfield
