#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "phifem/assembly.hpp"
#include "phifem/fe_function.hpp"
#include "phifem/levelset.hpp"

namespace phifem {

struct ScalarField {
    std::function<double(const Eigen::Vector2d&)> value;
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> gradient;
};

// Field evaluable at quadrature points of an integration grid. `defined`
// may veto points (used when a coarse solution does not cover the fine
// integration domain); empty means defined everywhere.
struct FieldOnGrid {
    std::function<double(int cell, const Eigen::Vector3d& bary, const Eigen::Vector2d& x)>
        value;
    std::function<Eigen::Vector2d(int cell, const Eigen::Vector3d& bary,
                                  const Eigen::Vector2d& x)>
        gradient;
    std::function<bool(const Eigen::Vector2d& x)> defined;
};

FieldOnGrid field_from_analytic(const ScalarField& f);
FieldOnGrid field_from_fe(const FeFunction& f);
// u = phi_h * w, optionally plus a lifting FE function (Dirichlet data).
FieldOnGrid field_from_fe_product(const DiscreteLevelSet& phi, const FeFunction& w,
                                  const FeFunction* lifting = nullptr);
// Evaluate a field living on another grid via point location; points whose
// located cell is inactive there are reported undefined.
FieldOnGrid field_via_location(const BackgroundGrid& src_grid, const CellSets& src_sets,
                               FieldOnGrid src_field);

enum class RelativeTo {
    reference_field,  // denominators from u_ref (the usual relative error)
    grid_solution,    // denominators from u_num
};

struct TripleNormBreakdown {
    // Squared components of the stabilized energy norm.
    double h1 = 0.0;            // |u|^2 over active cells
    double penalty = 0.0;       // (1/h^2) |u - phi_h p / h|^2 over cut cells
    double jump = 0.0;          // h * sum of squared normal-derivative jumps
    double second_order = 0.0;  // h^2 |lap u|^2 over cut cells
    double total = 0.0;         // sqrt of the sum
};

struct ErrorReport {
    double l2_rel = 0.0;
    double h1_rel = 0.0;  // semi-norm
    double l2_abs = 0.0;
    double h1_abs = 0.0;
    double l2_denom = 0.0;
    double h1_denom = 0.0;
    double h = 0.0;
    int n_dofs_u = 0;
    int n_dofs_p = 0;
    double cond = 0.0;  // optional, filled by studies
    TripleNormBreakdown triple;
};

// L2 and H1 errors over {phi < 0}: strictly interior cells use a standard
// high-order rule; cut cells are split into 4^subdivision congruent
// sub-triangles and only quadrature points with analytic phi < 0 are kept.
// Points where either field is undefined are skipped consistently.
ErrorReport compute_errors(const BackgroundGrid& grid, const CellSets& sets,
                           const LevelSet& phi, const FieldOnGrid& u_num,
                           const FieldOnGrid& u_ref, int subdivision = 2,
                           RelativeTo relative_to = RelativeTo::reference_field);

// Stabilized energy norm of a discrete pair; p may be null (treated as 0).
TripleNormBreakdown triple_norm(const FeFunction& u, const FeFunction* p,
                                const DiscreteLevelSet& dls, const CellSets& sets);

// Gram matrix of the squared energy norm over (u; p), so that
// x^T G x = triple_norm(u, p)^2 for the coefficient vector x.
LinearSystem triple_norm_gram(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                              const CellSets& sets, const DofMap& vh, const DofMap& qh);

struct CoercivityReport {
    double min_quotient = 0.0;
    int argmin_sample = -1;
    std::vector<double> quotients;
};

// Minimum Rayleigh quotient a(x,x) / energy_norm(x)^2 over seeded Gaussian
// samples; negative values indicate a loss of coercivity for these params.
CoercivityReport coercivity_ratio(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                                  const CellSets& sets, const DofMap& vh,
                                  const DofMap& qh, const SchemeParams& params,
                                  int n_samples = 100,
                                  std::uint64_t seed = 0x5eed2024u);

// Least-squares slope of log(error) against log(h).
double fit_rate(const std::vector<std::pair<double, double>>& h_and_error);

}  // namespace phifem
