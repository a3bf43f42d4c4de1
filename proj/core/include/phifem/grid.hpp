#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace phifem {

/// Axis-aligned bounding box of the fictitious domain O.
struct BoundingBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 1.0;
    double y_max = 1.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double diameter() const;
};

/// Affine geometry of one triangular cell: Jacobian of the reference map,
/// area, and per-edge outward normals. Local edge e is the edge opposite
/// local vertex e.
struct CellGeometry {
    Eigen::Matrix2d jacobian;        // columns (v1 - v0 | v2 - v0)
    Eigen::Matrix2d jacobian_inv_t;  // J^{-T}, maps reference gradients to physical
    double det_jacobian = 0.0;       // > 0 for counterclockwise cells
    double area = 0.0;               // det_jacobian / 2
    std::array<Eigen::Vector2d, 3> edge_normal;  // outward unit normals
    std::array<double, 3> edge_length{};
};

/// Structured triangulation of a Cartesian grid over a bounding box.
/// Every square is split by its lower-left -> upper-right diagonal into a
/// lower-right and an upper-left triangle, both counterclockwise.
///
/// Entity numbering is deterministic: vertices row-major, the two cells of
/// square (i,j) at indices 2*(j*nx+i) (lower-right) and 2*(j*nx+i)+1
/// (upper-left), facets in order of first appearance during the cell loop.
class BackgroundGrid {
public:
    const BoundingBox& bbox() const { return bbox_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }

    /// Global mesh size h: the (uniform) cell diameter sqrt(dx^2 + dy^2).
    double mesh_size() const { return h_; }

    int num_vertices() const { return static_cast<int>(vertex_coords_.size()); }
    int num_cells() const { return static_cast<int>(cell_vertices_.size()); }
    int num_facets() const { return static_cast<int>(facet_vertices_.size()); }

    Eigen::Vector2d vertex(int v) const { return vertex_coords_[static_cast<size_t>(v)]; }
    const std::array<int, 3>& cell_vertices(int c) const { return cell_vertices_[static_cast<size_t>(c)]; }
    const std::array<int, 2>& facet_vertices(int f) const { return facet_vertices_[static_cast<size_t>(f)]; }

    /// Adjacent cells of a facet; second entry is -1 for bbox-boundary facets.
    const std::array<int, 2>& facet_cells(int f) const { return facet_cells_[static_cast<size_t>(f)]; }
    bool facet_on_bbox_boundary(int f) const { return facet_cells_[static_cast<size_t>(f)][1] < 0; }

    /// Facet id of local edge e of cell c (edge opposite local vertex e).
    int cell_facet(int c, int e) const { return cell_facets_[static_cast<size_t>(c)][static_cast<size_t>(e)]; }

    /// Local edge index of facet f within cell c; throws if f is not an edge of c.
    int facet_local_edge(int f, int c) const;

    CellGeometry cell_geometry(int c) const;

    /// Map barycentric coordinates (w.r.t. the cell's vertex order) to physical.
    Eigen::Vector2d cell_point(int c, const Eigen::Vector3d& bary) const;
    Eigen::Vector2d cell_centroid(int c) const;

    friend BackgroundGrid build_grid(const BoundingBox& bbox, int nx, int ny);

private:
    BoundingBox bbox_;
    int nx_ = 0, ny_ = 0;
    double dx_ = 0.0, dy_ = 0.0, h_ = 0.0;
    std::vector<Eigen::Vector2d> vertex_coords_;
    std::vector<std::array<int, 3>> cell_vertices_;
    std::vector<std::array<int, 3>> cell_facets_;
    std::vector<std::array<int, 2>> facet_vertices_;
    std::vector<std::array<int, 2>> facet_cells_;
};

BackgroundGrid build_grid(const BoundingBox& bbox, int nx, int ny);

struct PointLocation {
    int cell = -1;
    Eigen::Vector3d barycentric = Eigen::Vector3d::Zero();
};

/// Constant-time point location using the Cartesian structure. Points on a
/// square's diagonal are assigned to the lower-right triangle. Throws if x
/// lies outside the bbox by more than 1e-12 * diam.
PointLocation locate_point(const BackgroundGrid& grid, const Eigen::Vector2d& x);

/// Outward unit normal of `cell` through `facet`. Throws on mismatch.
Eigen::Vector2d facet_orientation(const BackgroundGrid& grid, int facet, int cell);

/// Barycentric coordinates within `cell` of the point at parameter t along
/// `facet`, measured from facet_vertices(facet)[0]. Both adjacent cells see
/// the same physical point for the same t.
Eigen::Vector3d facet_point_barycentric(const BackgroundGrid& grid, int facet, int cell,
                                        double t);

}  // namespace phifem
