#include "phifem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace phifem {

double BoundingBox::diameter() const {
    return std::hypot(width(), height());
}

int BackgroundGrid::facet_local_edge(int f, int c) const {
    const auto& fs = cell_facets_[static_cast<size_t>(c)];
    for (int e = 0; e < 3; ++e) {
        if (fs[static_cast<size_t>(e)] == f) return e;
    }
    throw std::invalid_argument("facet_local_edge: facet " + std::to_string(f) +
                                " is not an edge of cell " + std::to_string(c));
}

CellGeometry BackgroundGrid::cell_geometry(int c) const {
    const auto& cv = cell_vertices_[static_cast<size_t>(c)];
    const Eigen::Vector2d v0 = vertex(cv[0]);
    const Eigen::Vector2d v1 = vertex(cv[1]);
    const Eigen::Vector2d v2 = vertex(cv[2]);

    CellGeometry g;
    g.jacobian.col(0) = v1 - v0;
    g.jacobian.col(1) = v2 - v0;
    g.det_jacobian = g.jacobian.determinant();
    g.area = 0.5 * g.det_jacobian;
    g.jacobian_inv_t = g.jacobian.inverse().transpose();

    // Edge e runs from vertex (e+1)%3 to vertex (e+2)%3; for a counterclockwise
    // cell the outward normal is the tangent rotated by -90 degrees.
    const std::array<Eigen::Vector2d, 3> v{v0, v1, v2};
    for (int e = 0; e < 3; ++e) {
        const Eigen::Vector2d a = v[static_cast<size_t>((e + 1) % 3)];
        const Eigen::Vector2d b = v[static_cast<size_t>((e + 2) % 3)];
        const Eigen::Vector2d t = b - a;
        const double len = t.norm();
        g.edge_length[static_cast<size_t>(e)] = len;
        g.edge_normal[static_cast<size_t>(e)] = Eigen::Vector2d(t.y(), -t.x()) / len;
    }
    return g;
}

Eigen::Vector2d BackgroundGrid::cell_point(int c, const Eigen::Vector3d& bary) const {
    const auto& cv = cell_vertices_[static_cast<size_t>(c)];
    return bary[0] * vertex(cv[0]) + bary[1] * vertex(cv[1]) + bary[2] * vertex(cv[2]);
}

Eigen::Vector2d BackgroundGrid::cell_centroid(int c) const {
    return cell_point(c, Eigen::Vector3d(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0));
}

BackgroundGrid build_grid(const BoundingBox& bbox, int nx, int ny) {
    if (nx < 1 || ny < 1) {
        throw std::invalid_argument("build_grid: subdivisions must be >= 1, got nx=" +
                                    std::to_string(nx) + " ny=" + std::to_string(ny));
    }
    if (!(bbox.x_min < bbox.x_max) || !(bbox.y_min < bbox.y_max)) {
        throw std::invalid_argument("build_grid: degenerate bounding box");
    }

    BackgroundGrid g;
    g.bbox_ = bbox;
    g.nx_ = nx;
    g.ny_ = ny;
    g.dx_ = bbox.width() / nx;
    g.dy_ = bbox.height() / ny;
    g.h_ = std::hypot(g.dx_, g.dy_);

    g.vertex_coords_.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            // last row/column pinned to the bbox edge to avoid roundoff drift
            const double x = (i == nx) ? bbox.x_max : bbox.x_min + i * g.dx_;
            const double y = (j == ny) ? bbox.y_max : bbox.y_min + j * g.dy_;
            g.vertex_coords_.emplace_back(x, y);
        }
    }

    auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };

    g.cell_vertices_.reserve(static_cast<size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            // lower-right then upper-left, both counterclockwise
            g.cell_vertices_.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            g.cell_vertices_.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    }

    const int n_cells = static_cast<int>(g.cell_vertices_.size());
    g.cell_facets_.assign(static_cast<size_t>(n_cells), {-1, -1, -1});
    std::map<std::pair<int, int>, int> facet_ids;
    for (int c = 0; c < n_cells; ++c) {
        const auto& cv = g.cell_vertices_[static_cast<size_t>(c)];
        for (int e = 0; e < 3; ++e) {
            const int a = cv[static_cast<size_t>((e + 1) % 3)];
            const int b = cv[static_cast<size_t>((e + 2) % 3)];
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = facet_ids.find(key);
            int fid;
            if (it == facet_ids.end()) {
                fid = static_cast<int>(g.facet_vertices_.size());
                facet_ids.emplace(key, fid);
                g.facet_vertices_.push_back({key.first, key.second});
                g.facet_cells_.push_back({c, -1});
            } else {
                fid = it->second;
                g.facet_cells_[static_cast<size_t>(fid)][1] = c;
            }
            g.cell_facets_[static_cast<size_t>(c)][static_cast<size_t>(e)] = fid;
        }
    }
    return g;
}

PointLocation locate_point(const BackgroundGrid& grid, const Eigen::Vector2d& x) {
    const BoundingBox& bb = grid.bbox();
    const double tol = 1e-12 * bb.diameter();
    if (x.x() < bb.x_min - tol || x.x() > bb.x_max + tol ||
        x.y() < bb.y_min - tol || x.y() > bb.y_max + tol) {
        throw std::invalid_argument("locate_point: point (" + std::to_string(x.x()) + ", " +
                                    std::to_string(x.y()) + ") outside the bounding box");
    }

    const double sx = (x.x() - bb.x_min) / grid.dx();
    const double sy = (x.y() - bb.y_min) / grid.dy();
    const int i = std::clamp(static_cast<int>(std::floor(sx)), 0, grid.nx() - 1);
    const int j = std::clamp(static_cast<int>(std::floor(sy)), 0, grid.ny() - 1);
    const double xi = sx - i;
    const double eta = sy - j;

    // Diagonal runs lower-left -> upper-right; ties go to the lower-right cell.
    const bool lower_right = eta <= xi;
    const int cell = 2 * (j * grid.nx() + i) + (lower_right ? 0 : 1);

    // Barycentric coordinates in local square coordinates.
    Eigen::Vector3d bary;
    if (lower_right) {
        // vertices (0,0), (1,0), (1,1): x = l1 + l2, y = l2
        bary[2] = eta;
        bary[1] = xi - eta;
        bary[0] = 1.0 - xi;
    } else {
        // vertices (0,0), (1,1), (0,1): x = l1, y = l1 + l2
        bary[1] = xi;
        bary[2] = eta - xi;
        bary[0] = 1.0 - eta;
    }
    for (int d = 0; d < 3; ++d) {
        bary[d] = std::clamp(bary[d], 0.0, 1.0);
    }
    bary /= bary.sum();
    return PointLocation{cell, bary};
}

Eigen::Vector2d facet_orientation(const BackgroundGrid& grid, int facet, int cell) {
    const int e = grid.facet_local_edge(facet, cell);
    return grid.cell_geometry(cell).edge_normal[static_cast<size_t>(e)];
}

Eigen::Vector3d facet_point_barycentric(const BackgroundGrid& grid, int facet, int cell,
                                        double t) {
    const auto& fv = grid.facet_vertices(facet);
    const auto& cv = grid.cell_vertices(cell);
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    bool found0 = false;
    bool found1 = false;
    for (int i = 0; i < 3; ++i) {
        if (cv[static_cast<size_t>(i)] == fv[0]) {
            b[i] += 1.0 - t;
            found0 = true;
        }
        if (cv[static_cast<size_t>(i)] == fv[1]) {
            b[i] += t;
            found1 = true;
        }
    }
    if (!found0 || !found1) {
        throw std::invalid_argument("facet_point_barycentric: facet is not an edge of the cell");
    }
    return b;
}

}  // namespace phifem
