#include "rodfield/solver.hpp"

#include <algorithm>
#include <ostream>

namespace rodfield {

double lambda_of_sigma(double sigma0) {
    if (!std::isfinite(sigma0) || sigma0 <= 0.0) throw ValidationError("sigma0", "conductivity must be > 0");
    if (sigma0 == 1.0) throw ValidationError("sigma0", "no contrast: sigma0 == 1");
    return (sigma0 + 1.0) / (2.0 * (sigma0 - 1.0));
}

ForwardSolution solve_forward(const RodSpec& spec, const HarmonicBackground& h, Resolution resolution) {
    spec.validate();
    if (h.trivial()) throw ValidationError("background", "background potential has no gradient");
    BoundaryMesh mesh = build_mesh(spec, resolution);
    const NpMatrix np = assemble_np(mesh);
    const DensityVector rhs = neumann_data(mesh, h);
    const double lambda = lambda_of_sigma(spec.sigma0);
    DensitySolveInfo info;
    DensityVector phi = solve_density(np, lambda, rhs, &info);
    return ForwardSolution{std::move(mesh), std::move(phi), lambda, h, info};
}

FieldValue eval_u(const ForwardSolution& sol, const Vec2& x) {
    FieldValue f = single_layer(sol.mesh, sol.phi, x);
    f.value += sol.background.value(x);
    return f;
}

FieldValue eval_grad_u(const ForwardSolution& sol, const Vec2& x) {
    FieldValue f = single_layer_grad(sol.mesh, sol.phi, x);
    f.gradient += sol.background.gradient(x);
    return f;
}

FieldValue eval_field(const ForwardSolution& sol, const Vec2& x) {
    FieldValue f = single_layer_eval(sol.mesh, sol.phi, x);
    f.value += sol.background.value(x);
    f.gradient += sol.background.gradient(x);
    return f;
}

std::vector<FieldValue> eval_field(const ForwardSolution& sol, const std::vector<Vec2>& points) {
    std::vector<FieldValue> out(points.size());
    const auto n = static_cast<long>(points.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = eval_field(sol, points[static_cast<std::size_t>(k)]);
    return out;
}

TransmissionReport transmission_check(const ForwardSolution& sol, int n_probe, TransmissionOptions opts) {
    const BoundaryMesh& mesh = sol.mesh;
    const RodSpec& spec = mesh.spec();

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (opts.region == ProbeRegion::facade_midsection) {
            if (is_cap(mesh[i].tag)) continue;
            if (std::abs(to_local(spec, mesh[i].position).x()) > 0.25 * spec.length) continue;
        }
        eligible.push_back(i);
    }

    TransmissionReport report;
    if (eligible.empty() || n_probe <= 0) return report;
    const int count = std::min<int>(n_probe, static_cast<int>(eligible.size()));
    for (int k = 0; k < count; ++k) {
        const std::size_t i = eligible[static_cast<std::size_t>(k) * eligible.size() / static_cast<std::size_t>(count)];
        const Vec2& x = mesh[i].position;
        const double dh = sol.background.gradient(x).dot(mesh[i].normal);
        const double outer = dh + single_layer_normal_limit(mesh, sol.phi, i, +1, opts.offset_factor);
        const double inner = dh + single_layer_normal_limit(mesh, sol.phi, i, -1, opts.offset_factor);

        report.max_mismatch = std::max(report.max_mismatch, std::abs(outer - spec.sigma0 * inner));
        report.field_scale = std::max(report.field_scale, sol.background.gradient(x).norm());
        ++report.probes;
    }
    report.relative_mismatch = report.field_scale > 0.0 ? report.max_mismatch / report.field_scale : 0.0;
    return report;
}

void write_field_csv(std::ostream& out, const std::vector<Vec2>& points, const std::vector<FieldValue>& values) {
    const auto old = out.precision(17);
    out << "x1,x2,u,ux,uy,near_boundary_flag\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        const FieldValue& f = values[k];
        out << points[k].x() << ',' << points[k].y() << ',' << f.value << ',' << f.gradient.x() << ','
            << f.gradient.y() << ',' << (f.near_boundary ? 1 : 0) << '\n';
    }
    out.precision(old);
}

}  // namespace rodfield
