#pragma once

#include <memory>
#include <string>
#include <vector>

#include "config.hpp"
#include "phifem/cases.hpp"
#include "phifem/dofmap.hpp"
#include "phifem/fe_function.hpp"
#include "phifem/grid.hpp"
#include "phifem/levelset.hpp"
#include "phifem/solver.hpp"
#include "phifem/verification.hpp"

namespace phifem::cli {

struct StudyRow {
    std::string variant;
    int n = 0;
    double h = 0.0;
    int n_dofs_u = 0;
    int n_dofs_p = 0;
    double err_l2_rel = 0.0;
    double err_h1_rel = 0.0;
    double cond_full = 0.0;  // 0 when not computed
    double cond_uu = 0.0;
    double assemble_ms = 0.0;  // 0 when timings are disabled
    double solve_ms = 0.0;
};

// Grid, discrete level-set, classification, and DOF maps for one (case, n).
// Heap members keep the internal cross-references stable under moves.
struct ProblemSetup {
    std::unique_ptr<BackgroundGrid> grid;
    std::unique_ptr<DiscreteLevelSet> dls;
    CellSets sets;
    std::unique_ptr<DofMap> vh;
    std::unique_ptr<DofMap> qh;
};

ProblemSetup make_setup(const TestCase& tc, const RunConfig& cfg, int n);
SchemeParams make_params(const TestCase& tc, const RunConfig& cfg);
SourceAndData make_data(const TestCase& tc);

struct VariantSolution {
    std::string variant;  // "dual" or "direct"
    LinearSystem system;
    SolveReport report;
};

VariantSolution solve_variant(const ProblemSetup& ps, const SchemeParams& params,
                              const SourceAndData& data, const std::string& variant,
                              double tol);

// Owns the FE functions backing a FieldOnGrid view of the solution u_h.
struct SolutionField {
    std::unique_ptr<FeFunction> primary;  // dual u, or the direct unknown w
    std::unique_ptr<FeFunction> aux;      // dual p (null otherwise)
    std::unique_ptr<FeFunction> lifting;  // direct Dirichlet interpolant
    FieldOnGrid field;
};

SolutionField make_solution_field(const ProblemSetup& ps, const VariantSolution& vs,
                                  const TestCase& tc);

int cmd_solve(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);
int cmd_condition(const RunConfig& cfg);
int cmd_cases();

}  // namespace phifem::cli
