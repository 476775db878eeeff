#include "rodfield/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>

namespace rodfield {

using std::numbers::pi;

void RodSpec::validate() const {
    if (!std::isfinite(length) || length < 0.0) throw ValidationError("L", "rod length must be finite and >= 0");
    if (!std::isfinite(delta) || delta <= 0.0) throw ValidationError("delta", "half-thickness must be > 0");
    if (!std::isfinite(sigma0) || sigma0 <= 0.0) throw ValidationError("sigma0", "conductivity must be > 0");
    if (sigma0 == 1.0) throw ValidationError("sigma0", "sigma0 == 1 means there is no inclusion");
    if (!center.allFinite()) throw ValidationError("center", "must be finite");
    if (!std::isfinite(angle)) throw ValidationError("angle", "must be finite");
}

Vec2 RodSpec::world_p() const { return to_world(*this, local_p()); }
Vec2 RodSpec::world_q() const { return to_world(*this, local_q()); }

double RodSpec::perimeter() const { return 2.0 * length + 2.0 * pi * delta; }
double RodSpec::area() const { return 2.0 * delta * length + pi * delta * delta; }

Vec2 to_world(const RodSpec& spec, const Vec2& x_local) {
    return rotation(spec.angle) * x_local + spec.center;
}

Vec2 to_local(const RodSpec& spec, const Vec2& x_world) {
    return rotation(spec.angle).transpose() * (x_world - spec.center);
}

double signed_distance(const RodSpec& spec, const Vec2& x_world) {
    const Vec2 xi = to_local(spec, x_world);
    const double half = 0.5 * spec.length;
    const Vec2 foot(std::clamp(xi.x(), -half, half), 0.0);
    return (xi - foot).norm() - spec.delta;
}

std::string_view tag_name(SegmentTag tag) {
    switch (tag) {
        case SegmentTag::facade_bottom: return "facade_bottom";
        case SegmentTag::cap_right: return "cap_right";
        case SegmentTag::facade_top: return "facade_top";
        case SegmentTag::cap_left: return "cap_left";
    }
    return "unknown";
}

Resolution auto_resolution(const RodSpec& spec, double nodes_per_delta) {
    Resolution r;
    r.n_cap = std::max(16, static_cast<int>(std::ceil(nodes_per_delta * pi)));
    r.n_facade = std::max({32, static_cast<int>(std::ceil(spec.length / spec.delta)),
                           static_cast<int>(std::ceil(nodes_per_delta * spec.length / spec.delta))});
    return r;
}

BoundaryMesh::BoundaryMesh(RodSpec spec, std::vector<BoundaryNode> nodes, Resolution counts)
    : spec_(spec), nodes_(std::move(nodes)), counts_(counts) {}

std::pair<Vec2, Vec2> BoundaryMesh::panel_point(std::size_t i, double t) const {
    const BoundaryNode& n = nodes_[i];
    if (n.curvature == 0.0) {
        const Vec2 tangent(-n.normal.y(), n.normal.x());
        return {n.position + t * tangent, n.normal};
    }
    const double r = 1.0 / n.curvature;
    const Vec2 c = n.position - r * n.normal;
    const Vec2 nu = rotation(t / r) * n.normal;
    return {c + r * nu, nu};
}

Eigen::VectorXd BoundaryMesh::weights() const {
    Eigen::VectorXd w(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) w[i] = nodes_[i].weight;
    return w;
}

double BoundaryMesh::max_spacing() const {
    double h = 0.0;
    for (const auto& n : nodes_) h = std::max(h, n.weight);
    return h;
}

double BoundaryMesh::quadrature_perimeter() const {
    double s = 0.0;
    for (const auto& n : nodes_) s += n.weight;
    return s;
}

Vec2 BoundaryMesh::quadrature_closure() const {
    Vec2 s = Vec2::Zero();
    for (const auto& n : nodes_) s += n.weight * n.normal;
    return s;
}

double BoundaryMesh::quadrature_area() const {
    double s = 0.0;
    for (const auto& n : nodes_) s += n.weight * n.position.dot(n.normal);
    return 0.5 * s;
}

std::size_t BoundaryMesh::mirror_index(std::size_t i) const {
    const std::size_t nf = spec_.length > 0.0 ? static_cast<std::size_t>(counts_.n_facade) : 0;
    const std::size_t nc = static_cast<std::size_t>(counts_.n_cap);
    const std::size_t bottom = 0;
    const std::size_t right = nf;
    const std::size_t top = nf + nc;
    const std::size_t left = 2 * nf + nc;
    if (i >= size()) return size();
    if (i < right) return top + (nf - 1 - (i - bottom));
    if (i < top) return right + (nc - 1 - (i - right));
    if (i < left) return bottom + (nf - 1 - (i - top));
    return left + (nc - 1 - (i - left));
}

namespace {

void append_facade(std::vector<BoundaryNode>& out, const RodSpec& spec, int n, bool top) {
    const double h = spec.length / n;
    const double half = 0.5 * spec.length;
    for (int k = 0; k < n; ++k) {
        const double s = (k + 0.5) * h;
        const Vec2 local = top ? Vec2(half - s, spec.delta) : Vec2(-half + s, -spec.delta);
        const Vec2 nu_local = top ? Vec2(0.0, 1.0) : Vec2(0.0, -1.0);
        out.push_back({to_world(spec, local), rotation(spec.angle) * nu_local, 0.0, h,
                       top ? SegmentTag::facade_top : SegmentTag::facade_bottom});
    }
}

void append_cap(std::vector<BoundaryNode>& out, const RodSpec& spec, int n, bool right) {
    const double dtheta = pi / n;
    const double start = right ? -0.5 * pi : 0.5 * pi;
    const Vec2 centre = right ? spec.local_q() : spec.local_p();
    for (int k = 0; k < n; ++k) {
        const double a = start + (k + 0.5) * dtheta;
        const Vec2 nu_local(std::cos(a), std::sin(a));
        out.push_back({to_world(spec, centre + spec.delta * nu_local), rotation(spec.angle) * nu_local,
                       1.0 / spec.delta, spec.delta * dtheta,
                       right ? SegmentTag::cap_right : SegmentTag::cap_left});
    }
}

}  // namespace

BoundaryMesh build_mesh(const RodSpec& spec, int n_cap, int n_facade) {
    spec.validate();
    if (n_cap < 8) throw ValidationError("n_cap", "need at least 8 nodes per cap");
    const bool has_facade = spec.length > 0.0;
    if (has_facade && n_facade < 8) throw ValidationError("n_facade", "need at least 8 nodes per facade side");

    std::vector<BoundaryNode> nodes;
    nodes.reserve(2 * n_cap + (has_facade ? 2 * n_facade : 0));
    if (has_facade) append_facade(nodes, spec, n_facade, false);
    append_cap(nodes, spec, n_cap, true);
    if (has_facade) append_facade(nodes, spec, n_facade, true);
    append_cap(nodes, spec, n_cap, false);
    return BoundaryMesh(spec, std::move(nodes), {n_cap, has_facade ? n_facade : 0});
}

void write_mesh_csv(std::ostream& out, const BoundaryMesh& mesh) {
    const auto old = out.precision(17);
    out << "x1,x2,nu1,nu2,kappa,weight,tag\n";
    for (const auto& n : mesh.nodes()) {
        out << n.position.x() << ',' << n.position.y() << ',' << n.normal.x() << ',' << n.normal.y() << ','
            << n.curvature << ',' << n.weight << ',' << tag_name(n.tag) << '\n';
    }
    out.precision(old);
}

}  // namespace rodfield
