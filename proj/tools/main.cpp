#include <cstdint>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "study.hpp"

namespace {

using phifem::cli::RunConfig;

// One flag set shared by all subcommands; option presence decides whether a
// value overrides the config file.
struct Flags {
    std::string config_path;
    std::string case_name;
    int n = 0;
    std::vector<int> ns;
    int k = 0;
    int l = 0;
    double gamma = 0.0;
    double sigma_d = 0.0;
    std::string variant;
    std::string stab2;
    std::vector<double> bbox;
    double solver_tol = 0.0;
    int error_subdivision = 0;
    int oversampling = 0;
    int reference_factor = 0;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool vtk = false;
    bool with_cond = false;
    bool no_timings = false;
    bool dump_matrix = false;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_case = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_ns = nullptr;
    CLI::Option* o_k = nullptr;
    CLI::Option* o_l = nullptr;
    CLI::Option* o_gamma = nullptr;
    CLI::Option* o_sigma = nullptr;
    CLI::Option* o_variant = nullptr;
    CLI::Option* o_stab2 = nullptr;
    CLI::Option* o_bbox = nullptr;
    CLI::Option* o_tol = nullptr;
    CLI::Option* o_subdiv = nullptr;
    CLI::Option* o_oversampling = nullptr;
    CLI::Option* o_ref_factor = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_vtk = nullptr;
    CLI::Option* o_cond = nullptr;
    CLI::Option* o_no_timings = nullptr;
    CLI::Option* o_dump = nullptr;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    f.o_config = cmd->add_option("--config", f.config_path, "JSON configuration file");
    f.o_case = cmd->add_option("--case", f.case_name, "built-in case name");
    f.o_n = cmd->add_option("--n", f.n, "grid subdivisions per axis (single run)");
    f.o_ns = cmd->add_option("--ns", f.ns, "comma-separated subdivision list")
                 ->delimiter(',');
    f.o_k = cmd->add_option("--k", f.k, "FE degree (1 or 2)");
    f.o_l = cmd->add_option("--l", f.l, "level-set degree (1 or 2; default matches k)");
    f.o_gamma = cmd->add_option("--gamma", f.gamma, "penalization weight");
    f.o_sigma = cmd->add_option("--sigma-d", f.sigma_d, "stabilization weight");
    f.o_variant =
        cmd->add_option("--variant", f.variant, "scheme variant: dual, direct, both");
    f.o_stab2 = cmd->add_option("--stab2", f.stab2,
                                "second-order stabilization: auto, on, off");
    f.o_bbox = cmd->add_option("--bbox", f.bbox, "background box: xmin ymin xmax ymax")
                   ->expected(4);
    f.o_tol = cmd->add_option("--solver-tol", f.solver_tol,
                              "relative residual target for the linear solve");
    f.o_subdiv = cmd->add_option("--error-subdivision", f.error_subdivision,
                                 "cut-cell refinement depth for error quadrature");
    f.o_oversampling = cmd->add_option("--oversampling", f.oversampling,
                                       "sign-sampling density for quadratic level sets");
    f.o_ref_factor = cmd->add_option("--reference-factor", f.reference_factor,
                                     "fine/coarse ratio for reference solves");
    f.o_out = cmd->add_option("--out", f.out_dir, "output directory");
    f.o_seed = cmd->add_option("--seed", f.seed, "seed for randomized estimators");
    f.o_vtk = cmd->add_flag("--vtk", f.vtk, "write VTK visualization output");
    f.o_cond = cmd->add_flag("--cond", f.with_cond,
                             "add condition-number estimates to solve/convergence rows");
    f.o_no_timings = cmd->add_flag("--no-timings", f.no_timings,
                                   "zero the timing columns for byte-stable CSVs");
    f.o_dump = cmd->add_flag("--dump-matrix", f.dump_matrix,
                             "write the assembled matrix in Matrix Market format");
}

int parse_stab2(const std::string& s) {
    if (s == "auto") return -1;
    if (s == "off") return 0;
    if (s == "on") return 1;
    throw std::invalid_argument("stab2 must be one of: auto, on, off");
}

RunConfig build_config(const Flags& f) {
    RunConfig cfg;
    if (f.o_config->count()) cfg = phifem::cli::load_config_file(f.config_path);
    if (f.o_case->count()) cfg.case_name = f.case_name;
    if (f.o_ns->count()) cfg.ns = f.ns;
    if (f.o_n->count()) cfg.ns = {f.n};
    if (f.o_k->count()) cfg.k = f.k;
    if (f.o_l->count()) cfg.l = f.l;
    if (f.o_gamma->count()) cfg.gamma = f.gamma;
    if (f.o_sigma->count()) cfg.sigma_d = f.sigma_d;
    if (f.o_variant->count()) cfg.variant = f.variant;
    if (f.o_stab2->count()) cfg.stab2 = parse_stab2(f.stab2);
    if (f.o_bbox->count()) {
        cfg.bbox = phifem::BoundingBox{f.bbox[0], f.bbox[1], f.bbox[2], f.bbox[3]};
        cfg.bbox_set = true;
    }
    if (f.o_tol->count()) cfg.solver_tol = f.solver_tol;
    if (f.o_subdiv->count()) cfg.error_subdivision = f.error_subdivision;
    if (f.o_oversampling->count()) cfg.oversampling = f.oversampling;
    if (f.o_ref_factor->count()) cfg.reference_factor = f.reference_factor;
    if (f.o_out->count()) cfg.out_dir = f.out_dir;
    if (f.o_seed->count()) cfg.seed = f.seed;
    if (f.o_vtk->count()) cfg.vtk = true;
    if (f.o_cond->count()) cfg.with_cond = true;
    if (f.o_no_timings->count()) cfg.timings = false;
    if (f.o_dump->count()) cfg.dump_matrix = true;
    phifem::cli::validate(cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Penalized fictitious-domain Poisson solver on level-set geometries"};
    app.require_subcommand(1);

    Flags solve_flags;
    Flags conv_flags;
    Flags cond_flags;
    CLI::App* solve_cmd =
        app.add_subcommand("solve", "solve one grid and report errors");
    CLI::App* conv_cmd =
        app.add_subcommand("convergence", "grid refinement study with fitted rates");
    CLI::App* cond_cmd =
        app.add_subcommand("condition", "condition-number scaling study");
    CLI::App* cases_cmd = app.add_subcommand("cases", "list built-in cases");
    (void)cases_cmd;
    add_common_flags(solve_cmd, solve_flags);
    add_common_flags(conv_cmd, conv_flags);
    add_common_flags(cond_cmd, cond_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) return phifem::cli::cmd_solve(build_config(solve_flags));
        if (conv_cmd->parsed()) {
            return phifem::cli::cmd_convergence(build_config(conv_flags));
        }
        if (cond_cmd->parsed()) {
            return phifem::cli::cmd_condition(build_config(cond_flags));
        }
        return phifem::cli::cmd_cases();
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
