#include "study.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <utility>

#include "phifem/assembly.hpp"
#include "phifem/vtk.hpp"

namespace phifem::cli {
namespace {

namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::invalid_argument("cannot create output directory '" + dir +
                                    "': " + ec.message());
    }
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path +
                                 "': " + ec.message());
    }
}

constexpr const char* kFullHeader =
    "variant,n,h,n_dofs_u,n_dofs_p,err_l2_rel,err_h1_rel,cond_full,cond_uu,"
    "assemble_ms,solve_ms";
constexpr const char* kCondHeader = "variant,n,h,n_dofs_u,n_dofs_p,cond_full,cond_uu";

std::string full_line(const StudyRow& r) {
    std::ostringstream os;
    os << r.variant << ',' << r.n << ',' << fmt(r.h) << ',' << r.n_dofs_u << ','
       << r.n_dofs_p << ',' << fmt(r.err_l2_rel) << ',' << fmt(r.err_h1_rel) << ','
       << fmt(r.cond_full) << ',' << fmt(r.cond_uu) << ',' << fmt(r.assemble_ms) << ','
       << fmt(r.solve_ms);
    return os.str();
}

std::string cond_line(const StudyRow& r) {
    std::ostringstream os;
    os << r.variant << ',' << r.n << ',' << fmt(r.h) << ',' << r.n_dofs_u << ','
       << r.n_dofs_p << ',' << fmt(r.cond_full) << ',' << fmt(r.cond_uu);
    return os.str();
}

void write_csv(const std::string& path, const RunConfig& cfg, const TestCase& tc,
               const SchemeParams& params, const std::vector<StudyRow>& rows,
               const std::vector<std::string>& footers, bool condition_only) {
    std::ostringstream os;
    os << "# phifem-study v1\n";
    os << "# config_hash " << config_hash(cfg) << '\n';
    os << "# case " << tc.name << '\n';
    os << "# gamma " << fmt(params.gamma) << '\n';
    os << "# sigma_d " << fmt(params.sigma_d) << '\n';
    os << "# k " << params.k << '\n';
    os << "# l " << params.l << '\n';
    os << (condition_only ? kCondHeader : kFullHeader) << '\n';
    for (const StudyRow& r : rows) {
        os << (condition_only ? cond_line(r) : full_line(r)) << '\n';
    }
    for (const std::string& f : footers) os << f << '\n';
    atomic_write_text(path, os.str());
    std::cout << "wrote " << path << '\n';
}

std::vector<std::string> requested_variants(const RunConfig& cfg) {
    if (cfg.variant == "both") return {"dual", "direct"};
    return {cfg.variant};
}

LinearSystem assemble_variant(const ProblemSetup& ps, const SchemeParams& params,
                              const SourceAndData& data, const std::string& variant) {
    if (variant == "dual") {
        return assemble_dual(*ps.grid, *ps.dls, ps.sets, *ps.vh, *ps.qh, params, data);
    }
    if (variant == "direct") {
        return assemble_direct(*ps.grid, *ps.dls, ps.sets, *ps.vh, params, data);
    }
    throw std::invalid_argument("unknown variant '" + variant + "'");
}

StudyRow base_row(const RunConfig& cfg, const ProblemSetup& ps, const VariantSolution& vs,
                  int n) {
    StudyRow r;
    r.variant = vs.variant;
    r.n = n;
    r.h = ps.grid->mesh_size();
    r.n_dofs_u = vs.system.n_u;
    r.n_dofs_p = vs.system.n_p;
    if (cfg.timings) {
        r.assemble_ms = vs.report.assembly_ms;
        r.solve_ms = vs.report.solve_ms;
    }
    return r;
}

// Estimator failures degrade to zero entries; a zero in a condition column
// therefore means "not available", never "well conditioned".
void fill_condition(const LinearSystem& system, const RunConfig& cfg, StudyRow& row) {
    try {
        row.cond_full = condition_estimate(system, 0.01, cfg.seed);
    } catch (const std::exception& e) {
        std::cerr << "warning: condition estimate failed (" << row.variant
                  << ", n=" << row.n << "): " << e.what() << '\n';
        row.cond_full = 0.0;
    }
    if (system.n_p == 0) {
        row.cond_uu = row.cond_full;
        return;
    }
    try {
        row.cond_uu = condition_estimate(system.uu_block(), 0.01, cfg.seed);
    } catch (const std::exception& e) {
        std::cerr << "warning: u-block condition estimate failed (" << row.variant
                  << ", n=" << row.n << "): " << e.what() << '\n';
        row.cond_uu = 0.0;
    }
}

std::string artifact_path(const RunConfig& cfg, const TestCase& tc, int n,
                          const std::string& variant, const std::string& ext) {
    std::ostringstream name;
    name << tc.name << "_n" << n << '_' << variant << ext;
    return (fs::path(cfg.out_dir) / name.str()).string();
}

std::string csv_path(const RunConfig& cfg, const TestCase& tc, const std::string& kind) {
    return (fs::path(cfg.out_dir) / (tc.name + "_" + kind + ".csv")).string();
}

void maybe_write_artifacts(const RunConfig& cfg, const TestCase& tc, int n,
                           const ProblemSetup& ps, const VariantSolution& vs,
                           const SolutionField& sf) {
    if (cfg.vtk) {
        const std::string path = artifact_path(cfg, tc, n, vs.variant, ".vtk");
        write_vtk(path, *ps.grid, ps.sets, *ps.dls, sf.field, sf.aux.get());
        std::cout << "wrote " << path << '\n';
    }
    if (cfg.dump_matrix) {
        const std::string path = artifact_path(cfg, tc, n, vs.variant, ".mtx");
        write_matrix_market(vs.system.matrix, path);
        std::cout << "wrote " << path << '\n';
    }
}

}  // namespace

ProblemSetup make_setup(const TestCase& tc, const RunConfig& cfg, int n) {
    const BoundingBox bbox = cfg.bbox_set ? cfg.bbox : tc.bbox;
    ProblemSetup ps;
    ps.grid = std::make_unique<BackgroundGrid>(build_grid(bbox, n, n));
    ps.dls = std::make_unique<DiscreteLevelSet>(
        interpolate_levelset(tc.phi, *ps.grid, cfg.effective_l()));
    ps.sets = classify(*ps.dls, cfg.oversampling);
    auto maps = build_dofmaps(*ps.grid, ps.sets, cfg.k);
    ps.vh = std::make_unique<DofMap>(std::move(maps.first));
    ps.qh = std::make_unique<DofMap>(std::move(maps.second));
    return ps;
}

SchemeParams make_params(const TestCase& tc, const RunConfig& cfg) {
    SchemeParams p;
    p.gamma = cfg.gamma > 0.0 ? cfg.gamma : tc.gamma;
    p.sigma_d = cfg.sigma_d > 0.0 ? cfg.sigma_d : tc.sigma_d;
    p.k = cfg.k;
    p.l = cfg.effective_l();
    p.second_order_stab = cfg.stab2 < 0   ? Stab2::automatic
                          : cfg.stab2 == 0 ? Stab2::off
                                           : Stab2::on;
    p.quadrature = cfg.quadrature;
    return p;
}

SourceAndData make_data(const TestCase& tc) {
    SourceAndData d;
    d.f = tc.f;
    d.u_dirichlet = tc.u_dirichlet;
    return d;
}

VariantSolution solve_variant(const ProblemSetup& ps, const SchemeParams& params,
                              const SourceAndData& data, const std::string& variant,
                              double tol) {
    VariantSolution vs;
    vs.variant = variant;
    const auto t0 = clock_type::now();
    vs.system = assemble_variant(ps, params, data, variant);
    const double assemble_ms = elapsed_ms(t0);
    vs.report = solve(vs.system, tol);
    vs.report.assembly_ms = assemble_ms;
    return vs;
}

SolutionField make_solution_field(const ProblemSetup& ps, const VariantSolution& vs,
                                  const TestCase& tc) {
    SolutionField sf;
    sf.primary = std::make_unique<FeFunction>(*ps.grid, *ps.vh, vs.report.u);
    if (vs.variant == "dual") {
        if (vs.system.n_p > 0) {
            sf.aux = std::make_unique<FeFunction>(*ps.grid, *ps.qh, vs.report.p);
        }
        sf.field = field_from_fe(*sf.primary);
        return sf;
    }
    if (tc.u_dirichlet) {
        Eigen::VectorXd g(ps.vh->num_dofs());
        for (int d = 0; d < ps.vh->num_dofs(); ++d) {
            g[d] = tc.u_dirichlet(ps.vh->dof_point(d));
        }
        sf.lifting = std::make_unique<FeFunction>(*ps.grid, *ps.vh, std::move(g));
    }
    sf.field = field_from_fe_product(*ps.dls, *sf.primary, sf.lifting.get());
    return sf;
}

int cmd_solve(const RunConfig& cfg) {
    const TestCase tc = get_case(cfg.case_name);
    ensure_out_dir(cfg.out_dir);
    const int n = cfg.ns.back();
    const SchemeParams params = make_params(tc, cfg);
    const SourceAndData data = make_data(tc);
    const ProblemSetup ps = make_setup(tc, cfg, n);

    std::vector<StudyRow> rows;
    for (const std::string& variant : requested_variants(cfg)) {
        VariantSolution vs = solve_variant(ps, params, data, variant, cfg.solver_tol);
        SolutionField sf = make_solution_field(ps, vs, tc);
        StudyRow row = base_row(cfg, ps, vs, n);
        if (tc.has_exact()) {
            const ErrorReport err =
                compute_errors(*ps.grid, ps.sets, tc.phi, sf.field,
                               field_from_analytic(tc.exact), cfg.error_subdivision);
            row.err_l2_rel = err.l2_rel;
            row.err_h1_rel = err.h1_rel;
        }
        if (cfg.with_cond) fill_condition(vs.system, cfg, row);

        std::cout << "case " << tc.name << "  variant " << variant << "  n " << n
                  << "  h " << fmt(row.h) << '\n';
        std::cout << "  dofs u " << row.n_dofs_u << "  p " << row.n_dofs_p
                  << "  residual " << fmt(vs.report.relative_residual) << '\n';
        if (tc.has_exact()) {
            std::cout << "  err L2 rel " << fmt(row.err_l2_rel) << "  H1 rel "
                      << fmt(row.err_h1_rel) << '\n';
        } else {
            std::cout << "  no manufactured solution; error columns left at 0"
                      << " (use the convergence command)\n";
        }
        if (cfg.with_cond) {
            std::cout << "  cond full " << fmt(row.cond_full) << "  uu "
                      << fmt(row.cond_uu) << '\n';
        }
        if (cfg.timings) {
            std::cout << "  assemble " << fmt(row.assemble_ms) << " ms  solve "
                      << fmt(row.solve_ms) << " ms\n";
        }
        rows.push_back(std::move(row));
        maybe_write_artifacts(cfg, tc, n, ps, vs, sf);
    }
    write_csv(csv_path(cfg, tc, "solve"), cfg, tc, params, rows, {}, false);
    return 0;
}

int cmd_convergence(const RunConfig& cfg) {
    const TestCase tc = get_case(cfg.case_name);
    if (cfg.ns.size() < 3) {
        throw std::invalid_argument("convergence needs at least 3 grid sizes (--ns)");
    }
    ensure_out_dir(cfg.out_dir);
    const SchemeParams params = make_params(tc, cfg);
    const SourceAndData data = make_data(tc);

    // Cases without a manufactured solution converge against a fine solve of
    // the penalized variant; coarse solutions are located into the fine grid.
    std::unique_ptr<ProblemSetup> ref_ps;
    std::unique_ptr<VariantSolution> ref_vs;
    std::unique_ptr<SolutionField> ref_sf;
    if (!tc.has_exact()) {
        const int n_ref = cfg.reference_factor * cfg.ns.back();
        std::cout << "reference: dual variant on n " << n_ref << '\n';
        ref_ps = std::make_unique<ProblemSetup>(make_setup(tc, cfg, n_ref));
        ref_vs = std::make_unique<VariantSolution>(
            solve_variant(*ref_ps, params, data, "dual", cfg.solver_tol));
        ref_sf = std::make_unique<SolutionField>(make_solution_field(*ref_ps, *ref_vs, tc));
    }

    std::vector<StudyRow> rows;
    std::vector<std::string> footers;
    for (const std::string& variant : requested_variants(cfg)) {
        std::vector<std::pair<double, double>> l2_pts;
        std::vector<std::pair<double, double>> h1_pts;
        for (int n : cfg.ns) {
            const ProblemSetup ps = make_setup(tc, cfg, n);
            VariantSolution vs = solve_variant(ps, params, data, variant, cfg.solver_tol);
            SolutionField sf = make_solution_field(ps, vs, tc);
            StudyRow row = base_row(cfg, ps, vs, n);
            ErrorReport err;
            if (tc.has_exact()) {
                err = compute_errors(*ps.grid, ps.sets, tc.phi, sf.field,
                                     field_from_analytic(tc.exact),
                                     cfg.error_subdivision);
            } else {
                const FieldOnGrid coarse =
                    field_via_location(*ps.grid, ps.sets, sf.field);
                err = compute_errors(*ref_ps->grid, ref_ps->sets, tc.phi, coarse,
                                     ref_sf->field, cfg.error_subdivision);
            }
            row.err_l2_rel = err.l2_rel;
            row.err_h1_rel = err.h1_rel;
            if (cfg.with_cond) fill_condition(vs.system, cfg, row);
            std::cout << "variant " << variant << "  n " << n << "  L2 rel "
                      << fmt(row.err_l2_rel) << "  H1 rel " << fmt(row.err_h1_rel)
                      << '\n';
            if (row.err_l2_rel > 0.0) l2_pts.emplace_back(row.h, row.err_l2_rel);
            if (row.err_h1_rel > 0.0) h1_pts.emplace_back(row.h, row.err_h1_rel);
            maybe_write_artifacts(cfg, tc, n, ps, vs, sf);
            rows.push_back(std::move(row));
        }
        if (l2_pts.size() >= 2) {
            footers.push_back("slope_l2," + variant + "," + fmt(fit_rate(l2_pts)));
        }
        if (h1_pts.size() >= 2) {
            footers.push_back("slope_h1," + variant + "," + fmt(fit_rate(h1_pts)));
        }
    }
    for (const std::string& f : footers) std::cout << f << '\n';
    write_csv(csv_path(cfg, tc, "convergence"), cfg, tc, params, rows, footers, false);
    return 0;
}

int cmd_condition(const RunConfig& cfg) {
    const TestCase tc = get_case(cfg.case_name);
    ensure_out_dir(cfg.out_dir);
    const SchemeParams params = make_params(tc, cfg);
    const SourceAndData data = make_data(tc);

    std::vector<StudyRow> rows;
    std::vector<std::string> footers;
    for (const std::string& variant : requested_variants(cfg)) {
        std::vector<std::pair<double, double>> pts;
        for (int n : cfg.ns) {
            const ProblemSetup ps = make_setup(tc, cfg, n);
            VariantSolution vs;
            vs.variant = variant;
            vs.system = assemble_variant(ps, params, data, variant);
            StudyRow row = base_row(cfg, ps, vs, n);
            fill_condition(vs.system, cfg, row);
            std::cout << "variant " << variant << "  n " << n << "  cond full "
                      << fmt(row.cond_full) << "  uu " << fmt(row.cond_uu) << '\n';
            if (row.cond_full > 0.0) pts.emplace_back(row.h, row.cond_full);
            rows.push_back(std::move(row));
        }
        if (pts.size() >= 2) {
            footers.push_back("slope_cond," + variant + "," + fmt(fit_rate(pts)));
        }
    }
    for (const std::string& f : footers) std::cout << f << '\n';
    write_csv(csv_path(cfg, tc, "condition"), cfg, tc, params, rows, footers, true);
    return 0;
}

int cmd_cases() {
    for (const std::string& name : case_names()) {
        const TestCase tc = get_case(name);
        std::cout << name << ": gamma " << fmt(tc.gamma) << ", sigma_d "
                  << fmt(tc.sigma_d)
                  << (tc.has_exact() ? ", manufactured solution"
                                     : ", reference-based errors only")
                  << '\n';
    }
    return 0;
}

}  // namespace phifem::cli
