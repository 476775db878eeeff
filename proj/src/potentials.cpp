#include "rodfield/potentials.hpp"

#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "rodfield/quadrature.hpp"

namespace rodfield {

using std::numbers::pi;

double weighted_total(const BoundaryMesh& mesh, const DensityVector& phi) {
    return mesh.weights().dot(phi.values);
}

Eigen::VectorXd NpMatrix::weighted_column_sums() const {
    // sum_i w_i M_ij / w_j
    Eigen::VectorXd s = (weights.transpose() * matrix).transpose();
    return s.cwiseQuotient(weights);
}

Eigen::VectorXcd NpMatrix::eigenvalues() const {
    Eigen::EigenSolver<Eigen::MatrixXd> es(matrix, false);
    return es.eigenvalues();
}

NpMatrix assemble_np(const BoundaryMesh& mesh, NpDiagonal diagonal) {
    const auto n = static_cast<Eigen::Index>(mesh.size());
    NpMatrix np;
    np.weights = mesh.weights();
    np.matrix.resize(n, n);
    const auto& nodes = mesh.nodes();

#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2& xi = nodes[i].position;
        const Vec2& nu = nodes[i].normal;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const Vec2 d = xi - nodes[j].position;
            np.matrix(i, j) = d.dot(nu) / (2.0 * pi * d.squaredNorm()) * nodes[j].weight;
        }
        np.matrix(i, i) = nodes[i].curvature / (4.0 * pi) * nodes[i].weight;
    }

    if (diagonal == NpDiagonal::gauss_identity) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wj = np.weights[j];
            double off = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (i != j) off += np.weights[i] * np.matrix(i, j) / wj;
            }
            // column identity: w_j k_jj + off = 1/2, and M_jj = k_jj w_j
            np.matrix(j, j) = 0.5 - off;
        }
    }
    return np;
}

DensityVector neumann_data(const BoundaryMesh& mesh, const HarmonicBackground& h) {
    static const QuadratureRule rule = gauss_legendre(8);
    DensityVector rhs;
    rhs.values.resize(static_cast<Eigen::Index>(mesh.size()));
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const double half = 0.5 * mesh[i].weight;
        double s = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const auto [x, nu] = mesh.panel_point(i, half * rule.nodes[k]);
            s += rule.weights[k] * h.gradient(x).dot(nu);
        }
        rhs.values[static_cast<Eigen::Index>(i)] = 0.5 * s;
    }
    return rhs;
}

DensityVector solve_density(const NpMatrix& np, double lambda, const DensityVector& rhs, DensitySolveInfo* info) {
    if (!(std::abs(lambda) > 0.5)) {
        std::ostringstream msg;
        msg << "solve_density: |lambda| = " << std::abs(lambda) << " <= 1/2, operator not invertible";
        throw SolverError(msg.str(), 0.0);
    }
    const auto n = np.matrix.rows();
    if (rhs.values.size() != n) throw std::invalid_argument("solve_density: rhs size does not match mesh");

    Eigen::MatrixXd a = -np.matrix;
    a.diagonal().array() += lambda;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-13)) {
        std::ostringstream msg;
        msg << "solve_density: system is numerically singular (rcond ~ " << rcond << ")";
        throw SolverError(msg.str(), rcond);
    }
    DensityVector phi;
    phi.values = lu.solve(rhs.values);
    // One step of iterative refinement.
    const Eigen::VectorXd r = rhs.values - a * phi.values;
    phi.values += lu.solve(r);

    if (info) {
        const double scale = rhs.values.norm();
        info->rcond = rcond;
        info->relative_residual = scale > 0.0 ? (rhs.values - a * phi.values).norm() / scale : 0.0;
    }
    return phi;
}

bool near_boundary(const BoundaryMesh& mesh, const Vec2& x) {
    for (const auto& node : mesh.nodes()) {
        if ((x - node.position).squaredNorm() < 4.0 * node.weight * node.weight) return true;
    }
    return false;
}

FieldValue single_layer(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x) {
    FieldValue out;
    const auto& nodes = mesh.nodes();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const Vec2 d = x - nodes[j].position;
        const double r2 = d.squaredNorm();
        if (r2 < 4.0 * nodes[j].weight * nodes[j].weight) out.near_boundary = true;
        out.value += std::log(r2) * phi.values[static_cast<Eigen::Index>(j)] * nodes[j].weight;
    }
    out.value /= 4.0 * pi;
    return out;
}

FieldValue single_layer_grad(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x) {
    FieldValue out;
    const auto& nodes = mesh.nodes();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const Vec2 d = x - nodes[j].position;
        const double r2 = d.squaredNorm();
        if (r2 < 4.0 * nodes[j].weight * nodes[j].weight) out.near_boundary = true;
        out.gradient += d * (phi.values[static_cast<Eigen::Index>(j)] * nodes[j].weight / r2);
    }
    out.gradient /= 2.0 * pi;
    return out;
}

double single_layer_normal_limit(const BoundaryMesh& mesh, const DensityVector& phi, std::size_t i, int side,
                                 double offset_factor) {
    const Vec2& x = mesh[i].position;
    const Vec2& nu = mesh[i].normal;
    const double h = side * std::min(offset_factor * mesh[i].weight, 0.4 * mesh.spec().delta);
    auto dn = [&](double s) { return single_layer_grad(mesh, phi, x + s * nu).gradient.dot(nu); };
    return 2.0 * dn(h) - dn(2.0 * h);
}

FieldValue single_layer_eval(const BoundaryMesh& mesh, const DensityVector& phi, const Vec2& x) {
    FieldValue out;
    const auto& nodes = mesh.nodes();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        const Vec2 d = x - nodes[j].position;
        const double r2 = d.squaredNorm();
        const double q = phi.values[static_cast<Eigen::Index>(j)] * nodes[j].weight;
        if (r2 < 4.0 * nodes[j].weight * nodes[j].weight) out.near_boundary = true;
        out.value += std::log(r2) * q;
        out.gradient += d * (q / r2);
    }
    out.value /= 4.0 * pi;
    out.gradient /= 2.0 * pi;
    return out;
}

void write_density_csv(std::ostream& out, const BoundaryMesh& mesh, const DensityVector& phi) {
    const auto old = out.precision(17);
    out << "node,x1,x2,phi\n";
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        out << i << ',' << mesh[i].position.x() << ',' << mesh[i].position.y() << ','
            << phi.values[static_cast<Eigen::Index>(i)] << '\n';
    }
    out.precision(old);
}

}  // namespace rodfield
