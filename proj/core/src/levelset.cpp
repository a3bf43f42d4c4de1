#include "phifem/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace phifem {

DiscreteLevelSet::DiscreteLevelSet(const BackgroundGrid& grid, int degree,
                                   std::vector<double> vertex_values,
                                   std::vector<double> facet_values)
    : grid_(&grid),
      degree_(degree),
      vertex_values_(std::move(vertex_values)),
      facet_values_(std::move(facet_values)),
      elem_(degree) {
    if (static_cast<int>(vertex_values_.size()) != grid.num_vertices()) {
        throw std::invalid_argument("DiscreteLevelSet: vertex value count mismatch");
    }
    if (degree_ == 2 && static_cast<int>(facet_values_.size()) != grid.num_facets()) {
        throw std::invalid_argument("DiscreteLevelSet: facet value count mismatch");
    }
    max_abs_ = 0.0;
    for (double v : vertex_values_) max_abs_ = std::max(max_abs_, std::abs(v));
    for (double v : facet_values_) max_abs_ = std::max(max_abs_, std::abs(v));
}

void DiscreteLevelSet::cell_nodal_values(int cell, double* out) const {
    const auto cv = grid_->cell_vertices(cell);
    for (int i = 0; i < 3; ++i) out[i] = vertex_values_[static_cast<size_t>(cv[static_cast<size_t>(i)])];
    if (degree_ == 2) {
        for (int e = 0; e < 3; ++e) {
            out[3 + e] = facet_values_[static_cast<size_t>(grid_->cell_facet(cell, e))];
        }
    }
}

double DiscreteLevelSet::value_on_cell(int cell, const Eigen::Vector3d& bary) const {
    double nodal[6];
    cell_nodal_values(cell, nodal);
    const BasisEval be = elem_.eval(bary);
    double v = 0.0;
    for (int i = 0; i < be.n; ++i) v += nodal[i] * be.value[static_cast<size_t>(i)];
    return v;
}

Eigen::Vector2d DiscreteLevelSet::gradient_on_cell(int cell,
                                                   const Eigen::Vector3d& bary) const {
    double nodal[6];
    cell_nodal_values(cell, nodal);
    const BasisEval be = elem_.eval(bary);
    Eigen::Vector2d g_ref = Eigen::Vector2d::Zero();
    for (int i = 0; i < be.n; ++i) g_ref += nodal[i] * be.grad[static_cast<size_t>(i)];
    return grid_->cell_geometry(cell).jacobian_inv_t * g_ref;
}

double DiscreteLevelSet::laplacian_on_cell(int cell, const Eigen::Vector3d& bary) const {
    if (degree_ == 1) return 0.0;
    double nodal[6];
    cell_nodal_values(cell, nodal);
    const BasisEval be = elem_.eval(bary);
    Eigen::Matrix2d h_ref = Eigen::Matrix2d::Zero();
    for (int i = 0; i < be.n; ++i) h_ref += nodal[i] * be.hessian[static_cast<size_t>(i)];
    const Eigen::Matrix2d& jit = grid_->cell_geometry(cell).jacobian_inv_t;
    return (jit * h_ref * jit.transpose()).trace();
}

std::pair<double, Eigen::Vector2d> DiscreteLevelSet::eval_on_cell(
    int cell, const Eigen::Vector3d& bary) const {
    double nodal[6];
    cell_nodal_values(cell, nodal);
    const BasisEval be = elem_.eval(bary);
    double v = 0.0;
    Eigen::Vector2d g_ref = Eigen::Vector2d::Zero();
    for (int i = 0; i < be.n; ++i) {
        v += nodal[i] * be.value[static_cast<size_t>(i)];
        g_ref += nodal[i] * be.grad[static_cast<size_t>(i)];
    }
    return {v, grid_->cell_geometry(cell).jacobian_inv_t * g_ref};
}

DiscreteLevelSet interpolate_levelset(const LevelSet& phi, const BackgroundGrid& grid,
                                      int l) {
    if (l != 1 && l != 2) {
        throw std::invalid_argument("interpolate_levelset: degree must be 1 or 2");
    }
    if (!phi.value) {
        throw std::invalid_argument("interpolate_levelset: level-set has no value function");
    }
    std::vector<double> vv(static_cast<size_t>(grid.num_vertices()));
    for (int v = 0; v < grid.num_vertices(); ++v) {
        vv[static_cast<size_t>(v)] = phi.value(grid.vertex(v));
    }
    std::vector<double> fv;
    if (l == 2) {
        fv.resize(static_cast<size_t>(grid.num_facets()));
        for (int f = 0; f < grid.num_facets(); ++f) {
            const auto fvtx = grid.facet_vertices(f);
            const Eigen::Vector2d mid =
                0.5 * (grid.vertex(fvtx[0]) + grid.vertex(fvtx[1]));
            fv[static_cast<size_t>(f)] = phi.value(mid);
        }
    }
    return DiscreteLevelSet(grid, l, std::move(vv), std::move(fv));
}

namespace {

struct SignSummary {
    bool has_neg = false;
    bool has_pos = false;
    bool has_zero = false;
};

void account(SignSummary& s, double v, double tau) {
    if (std::abs(v) <= tau) {
        s.has_zero = true;
    } else if (v < 0.0) {
        s.has_neg = true;
    } else {
        s.has_pos = true;
    }
}

}  // namespace

CellSets classify(const DiscreteLevelSet& dls, int oversampling) {
    const BackgroundGrid& grid = dls.grid();
    const double tau = 1e-12 * dls.max_abs_nodal();

    CellSets sets;
    sets.is_active.assign(static_cast<size_t>(grid.num_cells()), 0);
    sets.is_cut.assign(static_cast<size_t>(grid.num_cells()), 0);

    const bool oversample = dls.degree() >= 2 && oversampling >= 2;
    std::vector<Eigen::Vector3d> lattice;
    if (oversample) {
        const int s = oversampling;
        for (int i = 0; i <= s; ++i) {
            for (int j = 0; i + j <= s; ++j) {
                lattice.emplace_back(1.0 - double(i + j) / s, double(i) / s, double(j) / s);
            }
        }
    }

    double nodal[6];
    for (int c = 0; c < grid.num_cells(); ++c) {
        SignSummary s;
        dls.cell_nodal_values(c, nodal);
        for (int i = 0; i < dls.nodes_per_cell(); ++i) account(s, nodal[i], tau);
        if (oversample) {
            for (const Eigen::Vector3d& b : lattice) account(s, dls.value_on_cell(c, b), tau);
        }
        const bool all_zero = s.has_zero && !s.has_neg && !s.has_pos;
        const bool active = s.has_neg || all_zero;
        const bool cut = active && (s.has_pos || s.has_zero);
        if (active) {
            sets.is_active[static_cast<size_t>(c)] = 1;
            sets.active.push_back(c);
            if (cut) {
                sets.is_cut[static_cast<size_t>(c)] = 1;
                sets.cut.push_back(c);
            } else {
                sets.strictly_interior.push_back(c);
            }
        }
    }
    if (sets.active.empty()) {
        throw std::runtime_error("classify: empty domain (level-set is nonnegative everywhere)");
    }

    for (int f = 0; f < grid.num_facets(); ++f) {
        const auto fc = grid.facet_cells(f);
        const bool a0 = sets.is_active[static_cast<size_t>(fc[0])] != 0;
        const bool a1 = fc[1] >= 0 && sets.is_active[static_cast<size_t>(fc[1])] != 0;
        if (a0 != a1) {
            sets.omega_h_boundary_facets.push_back(f);
        } else if (a0 && a1) {
            const bool c0 = sets.is_cut[static_cast<size_t>(fc[0])] != 0;
            const bool c1 = sets.is_cut[static_cast<size_t>(fc[1])] != 0;
            if (c0 || c1) sets.ghost_facets.push_back(f);
        }
    }

    // Connectivity of the active region via facet adjacency (union-find).
    std::vector<int> parent(static_cast<size_t>(grid.num_cells()), -1);
    for (int c : sets.active) parent[static_cast<size_t>(c)] = c;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (int f = 0; f < grid.num_facets(); ++f) {
        const auto fc = grid.facet_cells(f);
        if (fc[1] < 0) continue;
        if (sets.is_active[static_cast<size_t>(fc[0])] && sets.is_active[static_cast<size_t>(fc[1])]) {
            parent[static_cast<size_t>(find(fc[0]))] = find(fc[1]);
        }
    }
    const int root = find(sets.active.front());
    for (int c : sets.active) {
        if (find(c) != root) {
            sets.connected = false;
            break;
        }
    }
    if (!sets.connected) {
        std::fprintf(stderr,
                     "warning: active region is not connected (%d active cells)\n",
                     static_cast<int>(sets.active.size()));
    }
    return sets;
}

}  // namespace phifem
