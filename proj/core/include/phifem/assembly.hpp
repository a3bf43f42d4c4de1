#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phifem/dofmap.hpp"
#include "phifem/grid.hpp"
#include "phifem/levelset.hpp"

namespace phifem {

enum class Stab2 {
    automatic,  // on for k = 2, off for k = 1
    on,
    off,
};

// Quadrature exactness overrides; 0 keeps the built-in default.
struct QuadratureOverrides {
    int volume_plain = 0;
    int volume_cut = 0;
    int segment = 0;
};

struct SchemeParams {
    double gamma = 100.0;    // penalization weight on cut cells
    double sigma_d = 0.1;    // ghost/second-order stabilization weight
    int k = 1;               // FE degree for u (and the auxiliary p)
    int l = 1;               // level-set interpolation degree
    Stab2 second_order_stab = Stab2::automatic;
    // Use per-cell diameters instead of the global mesh size in the
    // penalization and stabilization weights (uniform grids make both equal).
    bool per_cell_h = false;
    // Drop the boundary flux term; used to turn the assembled operator into
    // the Gram matrix of the stabilized energy norm.
    bool include_boundary_term = true;
    QuadratureOverrides quadrature;
};

struct SourceAndData {
    std::function<double(const Eigen::Vector2d&)> f;
    std::function<double(const Eigen::Vector2d&)> u_dirichlet;  // empty = 0
};

// Block system over (u; p). The p block is empty for the direct variant and
// when no cell is cut. The matrix is compressed with sorted inner indices
// and one entry per coordinate, built by a canonical triplet reduction, so
// equal inputs produce bitwise-equal matrices regardless of assembly order.
struct LinearSystem {
    int n_u = 0;
    int n_p = 0;
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;

    int size() const { return n_u + n_p; }
    Eigen::SparseMatrix<double> uu_block() const;
};

// Penalized scheme: find (u, p) with u = (phi_h p)/h + u_D enforced weakly on
// cut cells. Assembles
//   (a) grad u . grad v over active cells
//   (b) - boundary flux (du/dn) v over the active-region boundary
//   (c) (gamma/h^2) (u - phi_h p / h - u_D)(v - phi_h q / h) over cut cells
//   (d) sigma_d h [du/dn][dv/dn] over ghost facets
//   (e) sigma_d h^2 (lap u)(lap v) over cut cells (second-order stab)
// with right-hand side f v - sigma_d h^2 f lap v (+ u_D terms from (c)).
LinearSystem assemble_dual(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                           const CellSets& sets, const DofMap& vh, const DofMap& qh,
                           const SchemeParams& params, const SourceAndData& data);

// Baseline with the substitution u = phi_h w (+ interpolated u_D): one
// unknown w on all active cells, forms applied to the products phi_h w and
// phi_h v, same ghost stabilization. Needs phi_h on every active cell.
LinearSystem assemble_direct(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                             const CellSets& sets, const DofMap& vh,
                             const SchemeParams& params, const SourceAndData& data);

bool second_order_stab_enabled(const SchemeParams& params);

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path);

}  // namespace phifem
