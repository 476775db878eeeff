#pragma once

#include <iosfwd>
#include <vector>

#include "rodfield/potentials.hpp"

namespace rodfield {

/// lambda = (sigma0 + 1) / (2 (sigma0 - 1)); |lambda| > 1/2 for admissible sigma0.
double lambda_of_sigma(double sigma0);

/// u = H + S_D[phi] with phi = (lambda I - K*_D)^{-1}[dH/dnu].
struct ForwardSolution {
    BoundaryMesh mesh;
    DensityVector phi;
    double lambda;
    HarmonicBackground background;
    DensitySolveInfo solve_info;
};

ForwardSolution solve_forward(const RodSpec& spec, const HarmonicBackground& h, Resolution resolution);
inline ForwardSolution solve_forward(const RodSpec& spec, const HarmonicBackground& h) {
    return solve_forward(spec, h, auto_resolution(spec));
}

/// u(x), with the proximity flag of the layer sum.
FieldValue eval_u(const ForwardSolution& sol, const Vec2& x);
/// grad u(x) in `.gradient`.
FieldValue eval_grad_u(const ForwardSolution& sol, const Vec2& x);
/// Both value and gradient.
FieldValue eval_field(const ForwardSolution& sol, const Vec2& x);

/// Evaluates u and grad u at many points (parallel, output order = input order).
std::vector<FieldValue> eval_field(const ForwardSolution& sol, const std::vector<Vec2>& points);

enum class ProbeRegion { all, facade_midsection };

struct TransmissionOptions {
    double offset_factor = 5.0;  // h = offset_factor * local spacing, capped at 0.4 delta
    ProbeRegion region = ProbeRegion::all;
};

struct TransmissionReport {
    double max_mismatch = 0.0;     // max |du/dnu|_+ - sigma0 du/dnu|_-|
    double field_scale = 0.0;      // max |grad H| over probes
    double relative_mismatch = 0.0;
    int probes = 0;
};

/// Checks flux continuity sigma grad u . nu across the boundary at `n_probe`
/// nodes. One-sided normal derivatives as in single_layer_normal_limit.
TransmissionReport transmission_check(const ForwardSolution& sol, int n_probe, TransmissionOptions opts = {});

/// Columns: x1, x2, u, ux, uy, near_boundary_flag.
void write_field_csv(std::ostream& out, const std::vector<Vec2>& points, const std::vector<FieldValue>& values);

}  // namespace rodfield
