#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phifem/element.hpp"
#include "phifem/grid.hpp"

namespace phifem {

// Analytic level-set. The domain is {value < 0}, its boundary {value = 0}.
// gradient is optional; it is only consulted by verification helpers.
struct LevelSet {
    std::function<double(const Eigen::Vector2d&)> value;
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> gradient;
};

// Continuous Lagrange interpolant of a level-set on the background grid.
// Degree 1 stores values at vertices; degree 2 additionally at facet
// midpoints. Shared nodes are stored once, so per-cell evaluation is
// continuous across facets by construction.
class DiscreteLevelSet {
public:
    DiscreteLevelSet(const BackgroundGrid& grid, int degree,
                     std::vector<double> vertex_values,
                     std::vector<double> facet_values);

    const BackgroundGrid& grid() const { return *grid_; }
    int degree() const { return degree_; }

    double vertex_value(int v) const { return vertex_values_[static_cast<size_t>(v)]; }
    double facet_value(int f) const { return facet_values_[static_cast<size_t>(f)]; }
    double max_abs_nodal() const { return max_abs_; }

    int nodes_per_cell() const { return degree_ == 1 ? 3 : 6; }

    // Nodal values of the cell in reference-element node order
    // (vertices first, then midpoints of the opposite edges for degree 2).
    void cell_nodal_values(int cell, double* out) const;

    double value_on_cell(int cell, const Eigen::Vector3d& bary) const;
    Eigen::Vector2d gradient_on_cell(int cell, const Eigen::Vector3d& bary) const;
    double laplacian_on_cell(int cell, const Eigen::Vector3d& bary) const;
    std::pair<double, Eigen::Vector2d> eval_on_cell(int cell,
                                                    const Eigen::Vector3d& bary) const;

private:
    const BackgroundGrid* grid_;
    int degree_;
    std::vector<double> vertex_values_;
    std::vector<double> facet_values_;
    ReferenceElement elem_;
    double max_abs_;
};

// Cell/facet classification induced by the sign of the discrete level-set.
// active: cells meeting {phi_h < 0}; cut: active cells meeting {phi_h = 0};
// strictly_interior = active \ cut. Boundary facets have exactly one active
// neighbor; ghost facets are interior facets of the active region touching
// at least one cut cell. All id vectors are sorted ascending.
struct CellSets {
    std::vector<int> active;
    std::vector<int> cut;
    std::vector<int> strictly_interior;
    std::vector<int> omega_h_boundary_facets;
    std::vector<int> ghost_facets;
    std::vector<char> is_active;
    std::vector<char> is_cut;
    bool connected = true;
};

DiscreteLevelSet interpolate_levelset(const LevelSet& phi, const BackgroundGrid& grid,
                                      int l);

// Classification by nodal sign with tie tolerance tau = 1e-12 * max|nodal|.
// Nodes with |value| <= tau count as lying on the interface. For degree 2,
// each cell is additionally sampled on a barycentric sub-lattice with
// `oversampling` subdivisions per edge to catch interior sign changes that
// the six nodes miss. Throws if no cell is active.
CellSets classify(const DiscreteLevelSet& dls, int oversampling = 4);

}  // namespace phifem
