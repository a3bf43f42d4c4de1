#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phifem/grid.hpp"
#include "phifem/levelset.hpp"

namespace phifem {

enum class SpaceKind {
    continuous_on_active,   // Lagrange space on the active cells, nodes shared
    discontinuous_on_cut,   // element-wise space with private DOFs per cut cell
};

// Cell-to-global index map with dense indices in [0, num_dofs).
// Continuous maps number active vertices first (ascending vertex id), then
// for degree 2 the facets of active cells (ascending facet id), so the
// numbering is independent of assembly order. Discontinuous maps give each
// cut cell a contiguous private block, ordered by cell id.
class DofMap {
public:
    SpaceKind kind() const { return kind_; }
    int degree() const { return degree_; }
    int num_dofs() const { return num_dofs_; }
    int dofs_per_cell() const { return degree_ == 1 ? 3 : 6; }

    bool cell_has_dofs(int cell) const;
    // Global indices in reference node order (vertices, then opposite-edge
    // midpoints for degree 2). Precondition: cell_has_dofs(cell).
    void cell_dofs(int cell, int* out) const;

    // Continuous maps only; -1 when the node carries no DOF.
    int vertex_dof(int v) const { return vertex_dof_[static_cast<size_t>(v)]; }
    int facet_dof(int f) const { return facet_dof_[static_cast<size_t>(f)]; }
    // Physical location of a continuous DOF (vertex or facet midpoint).
    Eigen::Vector2d dof_point(int dof) const;

    friend std::pair<DofMap, DofMap> build_dofmaps(const BackgroundGrid& grid,
                                                   const CellSets& sets, int k);

private:
    const BackgroundGrid* grid_ = nullptr;
    SpaceKind kind_ = SpaceKind::continuous_on_active;
    int degree_ = 1;
    int num_dofs_ = 0;
    std::vector<int> vertex_dof_;   // continuous
    std::vector<int> facet_dof_;    // continuous, degree 2
    std::vector<int> cell_block_;   // discontinuous: block start, -1 if none
    std::vector<Eigen::Vector2d> dof_points_;  // continuous
};

// Builds the pair (continuous space on active cells, discontinuous space on
// cut cells) for polynomial degree k in {1,2}.
std::pair<DofMap, DofMap> build_dofmaps(const BackgroundGrid& grid, const CellSets& sets,
                                        int k);

}  // namespace phifem
