#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "rodfield/types.hpp"

namespace rodfield {

/// Straight rod ("stadium") inclusion: a 2*delta by L rectangle closed by two
/// half-disks of radius delta, placed in the plane by a rotation `angle`
/// about the origin followed by a translation to `center`.
///
/// L = 0 is legal and gives a disc of radius delta.
struct RodSpec {
    double length = 1.0;   // L
    double delta = 0.1;    // half-thickness
    Vec2 center = Vec2::Zero();
    double angle = 0.0;
    double sigma0 = 2.0;   // inclusion conductivity, background is 1

    /// Throws ValidationError naming the offending field.
    void validate() const;

    /// Cap centres in the local frame.
    Vec2 local_p() const { return {-0.5 * length, 0.0}; }
    Vec2 local_q() const { return {0.5 * length, 0.0}; }
    Vec2 world_p() const;
    Vec2 world_q() const;

    double perimeter() const;
    double area() const;
};

Vec2 to_world(const RodSpec& spec, const Vec2& x_local);
Vec2 to_local(const RodSpec& spec, const Vec2& x_world);

/// Signed distance to the rod boundary (negative inside).
double signed_distance(const RodSpec& spec, const Vec2& x_world);
inline bool inside_rod(const RodSpec& spec, const Vec2& x) { return signed_distance(spec, x) < 0.0; }

enum class SegmentTag { facade_bottom, cap_right, facade_top, cap_left };

std::string_view tag_name(SegmentTag tag);
inline bool is_cap(SegmentTag tag) { return tag == SegmentTag::cap_left || tag == SegmentTag::cap_right; }

struct BoundaryNode {
    Vec2 position;
    Vec2 normal;       // outward unit normal
    double curvature;  // 0 on facades, 1/delta on caps
    double weight;     // arc length of the panel the node sits on
    SegmentTag tag;
};

struct Resolution {
    int n_cap = 32;
    int n_facade = 64;
};

/// Node counts giving roughly `nodes_per_delta` panels per half-thickness on
/// every segment; n_facade >= max(32, ceil(L/delta)), n_cap >= 16.
Resolution auto_resolution(const RodSpec& spec, double nodes_per_delta = 4.0);

/// Nystrom discretisation of the rod boundary. Nodes are midpoints of
/// uniform-arc-length panels, traversed counterclockwise starting on the
/// bottom facade at the left junction. Immutable after construction.
class BoundaryMesh {
public:
    BoundaryMesh(RodSpec spec, std::vector<BoundaryNode> nodes, Resolution counts);

    const RodSpec& spec() const { return spec_; }
    const std::vector<BoundaryNode>& nodes() const { return nodes_; }
    const BoundaryNode& operator[](std::size_t i) const { return nodes_[i]; }
    std::size_t size() const { return nodes_.size(); }
    Resolution counts() const { return counts_; }

    /// Point and normal at arc offset `t` (|t| <= weight/2) from node i
    /// along the exact boundary.
    std::pair<Vec2, Vec2> panel_point(std::size_t i, double t) const;

    Eigen::VectorXd weights() const;
    double max_spacing() const;

    // Discrete mesh diagnostics.
    double quadrature_perimeter() const;
    Vec2 quadrature_closure() const;
    double quadrature_area() const;

    /// Mirror partner of node i across the rod axis (facade nodes only);
    /// returns size() when there is none.
    std::size_t mirror_index(std::size_t i) const;

private:
    RodSpec spec_;
    std::vector<BoundaryNode> nodes_;
    Resolution counts_;
};

/// pre: n_cap >= 8, n_facade >= 8 (n_facade ignored when L == 0).
BoundaryMesh build_mesh(const RodSpec& spec, int n_cap, int n_facade);
inline BoundaryMesh build_mesh(const RodSpec& spec, Resolution r) { return build_mesh(spec, r.n_cap, r.n_facade); }

/// Columns x1, x2, nu1, nu2, kappa, weight, tag.
void write_mesh_csv(std::ostream& out, const BoundaryMesh& mesh);

}  // namespace rodfield
