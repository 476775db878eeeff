#pragma once

#include <iosfwd>

#include <Eigen/Dense>

#include "rodfield/background.hpp"
#include "rodfield/geometry.hpp"

namespace rodfield {

/// Layer density sampled at mesh nodes.
struct DensityVector {
    Eigen::VectorXd values;
};

/// sum_i w_i phi_i
double weighted_total(const BoundaryMesh& mesh, const DensityVector& phi);

/// How the NP diagonal is filled.
///  - gauss_identity: chosen so that every weighted column sums to exactly 1/2,
///    the discrete form of K_D[1] = 1/2. Default.
///  - curvature_limit: the smooth-boundary kernel limit kappa/(4 pi).
enum class NpDiagonal { gauss_identity, curvature_limit };

/// Nystrom matrix of the Neumann-Poincare operator K*_D:
///   entry(i, j) = k*(x_i, x_j) w_j,  k*(x, y) = <x - y, nu_x> / (2 pi |x - y|^2).
struct NpMatrix {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd weights;

    std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
    /// sum_i w_i k*(x_i, x_j) for every column j.
    Eigen::VectorXd weighted_column_sums() const;
    Eigen::VectorXcd eigenvalues() const;
};

NpMatrix assemble_np(const BoundaryMesh& mesh, NpDiagonal diagonal = NpDiagonal::gauss_identity);

/// Normal derivative dH/dnu on each panel, averaged over the panel
/// (panel integral / weight). For H harmonic the weighted total vanishes to
/// rounding.
DensityVector neumann_data(const BoundaryMesh& mesh, const HarmonicBackground& h);

struct DensitySolveInfo {
    double relative_residual = 0.0;
    double rcond = 0.0;
};

/// Solves (lambda I - K*) phi = rhs by dense LU.
/// Throws SolverError when |lambda| <= 1/2 or the system is numerically singular.
DensityVector solve_density(const NpMatrix& np, double lambda, const DensityVector& rhs,
                            DensitySolveInfo* info = nullptr);

/// Potential or gradient value with a proximity flag: `near_boundary` is set
/// when the point is closer than twice the local panel length to some node,
/// where the Nystrom sum loses accuracy.
struct FieldValue {
    double value = 0.0;
    Vec2 gradient = Vec2::Zero();
    bool near_boundary = false;
};

bool near_boundary(const BoundaryMesh& mesh, const Vec2& x);

/// S_D[phi](x) = sum_j G(x - y_j) phi_j w_j,  G(x) = ln|x| / (2 pi).
FieldValue single_layer(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x);
/// Analytic gradient of the single-layer sum.
FieldValue single_layer_grad(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x);
/// Both at once.
FieldValue single_layer_eval(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x);

/// One-sided normal derivative of S[phi] at node i, outside (side = +1) or
/// inside (side = -1): grad S[phi] . nu sampled at x_i + side*h*nu_i and
/// x_i + side*2h*nu_i and extrapolated linearly to the boundary, with
/// h = min(offset_factor * w_i, 0.4 delta) so both samples stay on their side.
double single_layer_normal_limit(const BoundaryMesh& mesh, const DensityVector& phi, std::size_t i, int side,
                                 double offset_factor = 5.0);

/// Columns: node, x1, x2, phi.
void write_density_csv(std::ostream& out, const BoundaryMesh& mesh, const DensityVector& phi);

}  // namespace rodfield
