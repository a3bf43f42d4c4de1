#include "phifem/dofmap.hpp"

#include <stdexcept>

namespace phifem {

bool DofMap::cell_has_dofs(int cell) const {
    if (kind_ == SpaceKind::discontinuous_on_cut) {
        return cell_block_[static_cast<size_t>(cell)] >= 0;
    }
    const auto cv = grid_->cell_vertices(cell);
    for (int i = 0; i < 3; ++i) {
        if (vertex_dof_[static_cast<size_t>(cv[static_cast<size_t>(i)])] < 0) return false;
    }
    return true;
}

void DofMap::cell_dofs(int cell, int* out) const {
    if (kind_ == SpaceKind::discontinuous_on_cut) {
        const int block = cell_block_[static_cast<size_t>(cell)];
        if (block < 0) throw std::invalid_argument("DofMap::cell_dofs: cell is not cut");
        for (int i = 0; i < dofs_per_cell(); ++i) out[i] = block + i;
        return;
    }
    const auto cv = grid_->cell_vertices(cell);
    for (int i = 0; i < 3; ++i) {
        out[i] = vertex_dof_[static_cast<size_t>(cv[static_cast<size_t>(i)])];
        if (out[i] < 0) throw std::invalid_argument("DofMap::cell_dofs: cell is not active");
    }
    if (degree_ == 2) {
        for (int e = 0; e < 3; ++e) {
            out[3 + e] = facet_dof_[static_cast<size_t>(grid_->cell_facet(cell, e))];
        }
    }
}

Eigen::Vector2d DofMap::dof_point(int dof) const {
    if (kind_ != SpaceKind::continuous_on_active) {
        throw std::logic_error("DofMap::dof_point: only available for continuous maps");
    }
    return dof_points_[static_cast<size_t>(dof)];
}

std::pair<DofMap, DofMap> build_dofmaps(const BackgroundGrid& grid, const CellSets& sets,
                                        int k) {
    if (k != 1 && k != 2) {
        throw std::invalid_argument("build_dofmaps: degree must be 1 or 2");
    }

    DofMap vh;
    vh.grid_ = &grid;
    vh.kind_ = SpaceKind::continuous_on_active;
    vh.degree_ = k;
    vh.vertex_dof_.assign(static_cast<size_t>(grid.num_vertices()), -1);
    vh.facet_dof_.assign(static_cast<size_t>(grid.num_facets()), -1);

    std::vector<char> vertex_used(static_cast<size_t>(grid.num_vertices()), 0);
    std::vector<char> facet_used(static_cast<size_t>(grid.num_facets()), 0);
    for (int c : sets.active) {
        const auto cv = grid.cell_vertices(c);
        for (int i = 0; i < 3; ++i) {
            vertex_used[static_cast<size_t>(cv[static_cast<size_t>(i)])] = 1;
            facet_used[static_cast<size_t>(grid.cell_facet(c, i))] = 1;
        }
    }
    int next = 0;
    for (int v = 0; v < grid.num_vertices(); ++v) {
        if (vertex_used[static_cast<size_t>(v)]) {
            vh.vertex_dof_[static_cast<size_t>(v)] = next++;
            vh.dof_points_.push_back(grid.vertex(v));
        }
    }
    if (k == 2) {
        for (int f = 0; f < grid.num_facets(); ++f) {
            if (facet_used[static_cast<size_t>(f)]) {
                vh.facet_dof_[static_cast<size_t>(f)] = next++;
                const auto fv = grid.facet_vertices(f);
                vh.dof_points_.push_back(0.5 * (grid.vertex(fv[0]) + grid.vertex(fv[1])));
            }
        }
    }
    vh.num_dofs_ = next;

    DofMap qh;
    qh.grid_ = &grid;
    qh.kind_ = SpaceKind::discontinuous_on_cut;
    qh.degree_ = k;
    qh.cell_block_.assign(static_cast<size_t>(grid.num_cells()), -1);
    int block = 0;
    for (int c : sets.cut) {
        qh.cell_block_[static_cast<size_t>(c)] = block;
        block += qh.dofs_per_cell();
    }
    qh.num_dofs_ = block;

    return {std::move(vh), std::move(qh)};
}

}  // namespace phifem
