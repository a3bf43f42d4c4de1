// Acceptance gate for the penalized fictitious-domain solver. Each criterion
// prints one [PASS]/[FAIL] line with the measured quantities; the exit code
// is the number of failed criteria. Criteria marked as expected-red in the
// project notes are still asserted at their pinned windows.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "phifem/assembly.hpp"
#include "phifem/cases.hpp"
#include "phifem/dofmap.hpp"
#include "phifem/fe_function.hpp"
#include "phifem/grid.hpp"
#include "phifem/levelset.hpp"
#include "phifem/solver.hpp"
#include "phifem/verification.hpp"

using namespace phifem;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

void report(int criterion, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": "
              << detail << '\n';
    if (!pass) ++g_failures;
}

void context(const std::string& line) { std::cout << "       " << line << '\n'; }

bool in_window(double v, double lo, double hi) { return v >= lo && v <= hi; }

struct Setup {
    BackgroundGrid grid;
    DiscreteLevelSet dls;
    CellSets sets;
    DofMap vh;
    DofMap qh;

    Setup(const LevelSet& phi, const BoundingBox& box, int n, int k, int l)
        : grid(build_grid(box, n, n)),
          dls(interpolate_levelset(phi, grid, l)),
          sets(classify(dls)) {
        auto maps = build_dofmaps(grid, sets, k);
        vh = std::move(maps.first);
        qh = std::move(maps.second);
    }
};

SchemeParams params_for(int k, double gamma, double sigma_d) {
    SchemeParams p;
    p.gamma = gamma;
    p.sigma_d = sigma_d;
    p.k = k;
    p.l = k;
    return p;
}

struct RunResult {
    double h = 0.0;
    double l2 = 0.0;
    double h1 = 0.0;
};

RunResult run_dual(const TestCase& tc, int n, const SchemeParams& params) {
    const Setup s(tc.phi, tc.bbox, n, params.k, params.l);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    const LinearSystem sys =
        assemble_dual(s.grid, s.dls, s.sets, s.vh, s.qh, params, data);
    const SolveReport sol = solve(sys);
    const FeFunction u(s.grid, s.vh, sol.u);
    const ErrorReport err = compute_errors(s.grid, s.sets, tc.phi, field_from_fe(u),
                                           field_from_analytic(tc.exact));
    return {s.grid.mesh_size(), err.l2_rel, err.h1_rel};
}

RunResult run_direct(const TestCase& tc, int n, const SchemeParams& params) {
    const Setup s(tc.phi, tc.bbox, n, params.k, params.l);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    const LinearSystem sys = assemble_direct(s.grid, s.dls, s.sets, s.vh, params, data);
    const SolveReport sol = solve(sys);
    const FeFunction w(s.grid, s.vh, sol.u);
    const ErrorReport err =
        compute_errors(s.grid, s.sets, tc.phi, field_from_fe_product(s.dls, w),
                       field_from_analytic(tc.exact));
    return {s.grid.mesh_size(), err.l2_rel, err.h1_rel};
}

// ---- criteria 1 and 2: convergence rates on the manufactured disk case ----

void criteria_rates() {
    const TestCase tc = get_case("disk-exp");
    const std::vector<int> ns = {16, 32, 64, 128};
    double slopes_l2[2] = {0.0, 0.0};
    double slopes_h1[2] = {0.0, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    for (int k : {1, 2}) {
        std::vector<std::pair<double, double>> l2_pts, h1_pts;
        for (int n : ns) {
            const RunResult r = run_dual(tc, n, params_for(k, 100.0, 0.1));
            l2_pts.emplace_back(r.h, r.l2);
            h1_pts.emplace_back(r.h, r.h1);
        }
        slopes_l2[k - 1] = fit_rate(l2_pts);
        slopes_h1[k - 1] = fit_rate(h1_pts);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const bool h1_ok = in_window(slopes_h1[0], 0.85, 1.15) &&
                       in_window(slopes_h1[1], 1.75, 2.25) && seconds < 60.0;
    report(1, h1_ok,
           "H1 rates, penalized scheme, gamma=100 sigma=0.1 (k=1: " +
               fmt(slopes_h1[0]) + " in [0.85,1.15]; k=2: " + fmt(slopes_h1[1]) +
               " in [1.75,2.25]; " + fmt(seconds, 3) + " s < 60 s)");
    const bool l2_ok =
        in_window(slopes_l2[0], 1.8, 2.2) && in_window(slopes_l2[1], 2.7, 3.3);
    report(2, l2_ok,
           "L2 rates, same runs (k=1: " + fmt(slopes_l2[0]) + " in [1.8,2.2]; k=2: " +
               fmt(slopes_l2[1]) + " in [2.7,3.3])");
}

// ---- criterion 3: condition number growth of the full block matrix ----

void criterion_condition() {
    const TestCase tc = get_case("disk-poly");
    const SchemeParams params = params_for(1, tc.gamma, tc.sigma_d);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    std::vector<std::pair<double, double>> full_pts, uu_pts, direct_pts;
    for (int n : {8, 16, 32, 64}) {
        const Setup s(tc.phi, tc.bbox, n, 1, 1);
        const LinearSystem dual =
            assemble_dual(s.grid, s.dls, s.sets, s.vh, s.qh, params, data);
        full_pts.emplace_back(s.grid.mesh_size(), condition_estimate(dual));
        uu_pts.emplace_back(s.grid.mesh_size(), condition_estimate(dual.uu_block()));
        const LinearSystem direct =
            assemble_direct(s.grid, s.dls, s.sets, s.vh, params, data);
        direct_pts.emplace_back(s.grid.mesh_size(), condition_estimate(direct));
    }
    const double slope_full = fit_rate(full_pts);
    const bool ok = in_window(slope_full, -2.4, -1.6);
    report(3, ok,
           "condition growth of the full penalized matrix, slope " + fmt(slope_full) +
               " in [-2.4,-1.6]");
    context("kappa(full) = " + fmt(full_pts[0].second, 6) + ", " +
            fmt(full_pts[1].second, 6) + ", " + fmt(full_pts[2].second, 6) + ", " +
            fmt(full_pts[3].second, 6) + " for n = 8, 16, 32, 64");
    context("primary-block slope " + fmt(fit_rate(uu_pts)) +
            " follows the expected h^-2; direct-variant slope " +
            fmt(fit_rate(direct_pts)) +
            "; the unstabilized auxiliary block pins the full matrix to a "
            "penalty-level plateau on these sizes");
}

// ---- criterion 4: exact reproduction of polynomial solutions ----

void criterion_exactness() {
    const TestCase patch = get_case("patch-linear");
    const RunResult lin = run_dual(patch, 8, params_for(1, patch.gamma, patch.sigma_d));
    const TestCase poly = get_case("disk-poly");
    const RunResult quad = run_dual(poly, 16, params_for(2, poly.gamma, poly.sigma_d));
    const bool ok = lin.h1 <= 1e-9 && quad.h1 <= 1e-8;
    report(4, ok,
           "polynomial exactness (linear patch H1 " + fmt(lin.h1, 3) +
               " <= 1e-9; quadratic disk H1 " + fmt(quad.h1, 3) + " <= 1e-8)");
}

// ---- criterion 5: coercivity of the bilinear form at reference parameters ----

// Frozen after the first trusted run; the sampling is fully deterministic.
constexpr double kCoercivityBaseline[3] = {1.38587368227, 1.3882786205, 1.31187142937};

void criterion_coercivity() {
    const TestCase tc = get_case("disk-poly");
    const int ns[3] = {16, 32, 64};
    bool ok = true;
    std::string values;
    for (int i = 0; i < 3; ++i) {
        const Setup s(tc.phi, tc.bbox, ns[i], 1, 1);
        SchemeParams params = params_for(1, 100.0, 1.0);
        const CoercivityReport rep =
            coercivity_ratio(s.grid, s.dls, s.sets, s.vh, s.qh, params, 100);
        ok = ok && rep.min_quotient > 0.0;
        if (kCoercivityBaseline[i] > 0.0) {
            ok = ok && std::abs(rep.min_quotient - kCoercivityBaseline[i]) <=
                           1e-6 * kCoercivityBaseline[i];
        }
        if (!values.empty()) values += ", ";
        values += fmt(rep.min_quotient, 12);
    }
    report(5, ok,
           "minimum Rayleigh quotient over 100 Gaussian samples positive at n = 16, "
           "32, 64 (gamma=100 sigma=1, k=1): " + values);
}

// ---- criterion 6: classification against a dense sampling oracle ----

void criterion_classification() {
    std::mt19937_64 rng(0xC1A551F1ull);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> shift(-0.7, 0.7);
    const BoundingBox box{0.0, 0.0, 1.0, 1.0};
    int mismatches = 0;
    int checked = 0;
    for (int n : {4, 8}) {
        const BackgroundGrid grid = build_grid(box, n, n);
        for (int trial = 0; trial < 50; ++trial) {
            double a = coef(rng), b = coef(rng), c = shift(rng);
            while (std::abs(a) + std::abs(b) < 0.1) {
                a = coef(rng);
                b = coef(rng);
            }
            LevelSet phi;
            phi.value = [a, b, c](const Eigen::Vector2d& p) {
                return a * p.x() + b * p.y() + c;
            };
            const DiscreteLevelSet dls = interpolate_levelset(phi, grid, 1);
            const double tau = 1e-12 * dls.max_abs_nodal();

            // dense 50x50 barycentric lattice per cell
            std::vector<char> oracle_active(static_cast<size_t>(grid.num_cells()), 0);
            std::vector<char> oracle_cut(static_cast<size_t>(grid.num_cells()), 0);
            bool any_active = false;
            const int s = 50;
            for (int cell = 0; cell < grid.num_cells(); ++cell) {
                bool neg = false, pos = false, zero = false;
                for (int i = 0; i <= s; ++i) {
                    for (int j = 0; j <= s - i; ++j) {
                        const Eigen::Vector3d bary(
                            static_cast<double>(s - i - j) / s,
                            static_cast<double>(i) / s, static_cast<double>(j) / s);
                        const double v = dls.value_on_cell(cell, bary);
                        if (v < -tau) {
                            neg = true;
                        } else if (v > tau) {
                            pos = true;
                        } else {
                            zero = true;
                        }
                    }
                }
                const bool active = neg || (zero && !pos && !neg);
                oracle_active[static_cast<size_t>(cell)] = active ? 1 : 0;
                oracle_cut[static_cast<size_t>(cell)] =
                    (active && (pos || zero)) ? 1 : 0;
                any_active = any_active || active;
            }

            if (!any_active) {
                try {
                    classify(dls);
                    ++mismatches;  // should have refused an empty domain
                } catch (const std::runtime_error&) {
                }
                ++checked;
                continue;
            }
            const CellSets sets = classify(dls);
            for (int cell = 0; cell < grid.num_cells(); ++cell) {
                if (sets.is_active[static_cast<size_t>(cell)] !=
                        oracle_active[static_cast<size_t>(cell)] ||
                    sets.is_cut[static_cast<size_t>(cell)] !=
                        oracle_cut[static_cast<size_t>(cell)]) {
                    ++mismatches;
                }
            }
            ++checked;
        }
    }
    report(6, mismatches == 0,
           "cell classification matches dense sampling on " + std::to_string(checked) +
               " random affine level-sets (" + std::to_string(mismatches) +
               " cell mismatches)");
}

// ---- criterion 7: quadrature and basis function sanity ----

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

void criterion_quadrature() {
    bool ok = true;
    std::string first_issue;
    auto fail = [&](const std::string& why) {
        ok = false;
        if (first_issue.empty()) first_issue = why;
    };

    for (int req = 1; req <= 10; ++req) {
        const QuadratureRule rule = triangle_quadrature(req);
        if (rule.exactness < req) fail("triangle exactness below request");
        for (int a = 0; a + 0 <= rule.exactness; ++a) {
            for (int b = 0; a + b <= rule.exactness; ++b) {
                double sum = 0.0;
                for (size_t q = 0; q < rule.points.size(); ++q) {
                    sum += rule.weights[q] * std::pow(rule.points[q][1], a) *
                           std::pow(rule.points[q][2], b);
                }
                const double exact =
                    factorial(a) * factorial(b) / factorial(a + b + 2);
                if (std::abs(sum - exact) > 1e-13) {
                    fail("triangle rule " + std::to_string(req) + " misses x^" +
                         std::to_string(a) + " y^" + std::to_string(b));
                }
            }
        }
    }
    for (int req = 1; req <= 12; ++req) {
        const QuadratureRule rule = segment_quadrature(req);
        for (int a = 0; a <= rule.exactness; ++a) {
            double sum = 0.0;
            for (size_t q = 0; q < rule.points.size(); ++q) {
                sum += rule.weights[q] * std::pow(rule.points[q][1], a);
            }
            if (std::abs(sum - 1.0 / (a + 1)) > 1e-13) {
                fail("segment rule " + std::to_string(req) + " misses t^" +
                     std::to_string(a));
            }
        }
    }

    std::mt19937_64 rng(7u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int degree : {1, 2}) {
        const ReferenceElement elem(degree);
        for (int i = 0; i < elem.num_nodes(); ++i) {
            const BasisEval at_node = elem.eval(elem.node(i));
            for (int j = 0; j < elem.num_nodes(); ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                if (std::abs(at_node.value[static_cast<size_t>(j)] - expect) > 1e-14) {
                    fail("basis Kronecker property violated");
                }
            }
        }
        for (int t = 0; t < 30; ++t) {
            double l1 = uni(rng), l2v = uni(rng) * (1.0 - l1);
            const Eigen::Vector3d bary(1.0 - l1 - l2v, l1, l2v);
            const BasisEval be = elem.eval(bary);
            double sum = 0.0;
            for (int i = 0; i < be.n; ++i) sum += be.value[static_cast<size_t>(i)];
            if (std::abs(sum - 1.0) > 1e-13) fail("partition of unity violated");
        }
    }

    // mapped gradients against a directional finite difference through the
    // physical map of a background cell
    const BackgroundGrid grid = build_grid(BoundingBox{0.0, 0.0, 1.3, 0.9}, 3, 3);
    const ReferenceElement p2(2);
    const Eigen::Vector3d bary(0.3, 0.45, 0.25);
    const Eigen::Vector3d dir(-1.0, 0.4, 0.6);  // components sum to zero
    const double eps = 1e-6;
    for (int cell : {0, 5, 11, 16}) {
        const CellGeometry geo = grid.cell_geometry(cell);
        const BasisEval at = p2.eval(bary);
        const Eigen::Vector2d dx_dt =
            (grid.cell_point(cell, bary + eps * dir) -
             grid.cell_point(cell, bary - eps * dir)) /
            (2.0 * eps);
        for (int i = 0; i < at.n; ++i) {
            const Eigen::Vector2d g_phys =
                geo.jacobian_inv_t * at.grad[static_cast<size_t>(i)];
            const double fd =
                (p2.eval(bary + eps * dir).value[static_cast<size_t>(i)] -
                 p2.eval(bary - eps * dir).value[static_cast<size_t>(i)]) /
                (2.0 * eps);
            if (std::abs(g_phys.dot(dx_dt) - fd) > 1e-6) {
                fail("mapped gradient disagrees with finite differences");
            }
        }
    }

    report(7, ok,
           ok ? "quadrature rules exact to 1e-13; basis interpolation, partition of "
                "unity and mapped gradients verified"
              : "quadrature/basis check failed: " + first_issue);
}

// ---- criterion 8: the two scheme variants agree within a small factor ----

void criterion_variants() {
    const TestCase tc = get_case("disk-exp");
    const SchemeParams params = params_for(1, tc.gamma, tc.sigma_d);
    const RunResult dual = run_dual(tc, 64, params);
    const RunResult direct = run_direct(tc, 64, params);
    const double r_l2 = std::max(dual.l2, direct.l2) / std::min(dual.l2, direct.l2);
    const double r_h1 = std::max(dual.h1, direct.h1) / std::min(dual.h1, direct.h1);
    const bool ok = r_l2 <= 3.0 && r_h1 <= 3.0;
    report(8, ok,
           "penalized vs product-substitution errors within factor 3 at n=64 (L2 "
           "ratio " + fmt(r_l2, 3) + ", H1 ratio " + fmt(r_h1, 3) + ")");
    context("penalized L2 " + fmt(dual.l2, 4) + " H1 " + fmt(dual.h1, 4) +
            "; substitution L2 " + fmt(direct.l2, 4) + " H1 " + fmt(direct.h1, 4));
}

// ---- criteria 9 and 10 exercise the command-line pipeline ----

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(PHIFEM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1 || !WIFEXITED(status)) return -1;
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_reference_convergence(const fs::path& scratch) {
    const fs::path dir = scratch / "tc1";
    fs::create_directories(dir);
    const int code =
        run_cli("convergence --case tc1 --ns 32,64,128 --k 1 --out " + dir.string());
    bool ok = code == 0;
    std::vector<double> l2;
    double slope_l2 = 0.0, slope_h1 = 0.0;
    if (ok) {
        std::istringstream in(slurp(dir / "tc1_convergence.csv"));
        std::string line;
        int l2_col = -1;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> fields;
            std::string f;
            std::istringstream ls(line);
            while (std::getline(ls, f, ',')) fields.push_back(f);
            if (l2_col < 0) {
                for (size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == "err_l2_rel") l2_col = static_cast<int>(i);
                }
                continue;
            }
            if (fields[0] == "slope_l2") {
                slope_l2 = std::stod(fields[2]);
            } else if (fields[0] == "slope_h1") {
                slope_h1 = std::stod(fields[2]);
            } else if (fields[0] == "dual" && l2_col >= 0) {
                l2.push_back(std::stod(fields[static_cast<size_t>(l2_col)]));
            }
        }
        ok = ok && l2.size() == 3 && l2[0] > l2[1] && l2[1] > l2[2];
        ok = ok && slope_l2 > 0.0 && slope_h1 > 0.0;
    }
    const double anchor = tc1_levelset().value(Eigen::Vector2d(0.356, 0.507));
    ok = ok && std::abs(anchor + 0.5) <= 1e-12;
    std::string detail =
        "five-bump geometry self-convergence against a 4x finer reference";
    if (l2.size() == 3) {
        detail += " (L2 " + fmt(l2[0], 4) + " > " + fmt(l2[1], 4) + " > " +
                  fmt(l2[2], 4) + "; slopes L2 " + fmt(slope_l2) + ", H1 " +
                  fmt(slope_h1) + "; anchor value " + fmt(anchor, 12) + ")";
    } else {
        detail += " (pipeline failed, exit " + std::to_string(code) + ")";
    }
    report(9, ok, detail);
}

void criterion_determinism(const fs::path& scratch) {
    const fs::path a = scratch / "det_a";
    const fs::path b = scratch / "det_b";
    fs::create_directories(a);
    fs::create_directories(b);
    const std::string common =
        "solve --case disk-poly --n 16 --k 1 --cond --no-timings --seed 7 --out ";
    const int ca = run_cli(common + a.string());
    const int cb = run_cli(common + b.string());
    bool ok = ca == 0 && cb == 0;
    if (ok) {
        const std::string fa = slurp(a / "disk-poly_solve.csv");
        const std::string fb = slurp(b / "disk-poly_solve.csv");
        ok = !fa.empty() && fa == fb;
    }
    report(10, ok,
           ok ? "repeated fixed-seed runs produce byte-identical result files"
              : "fixed-seed runs differ or failed");
}

}  // namespace

int main() {
    const fs::path scratch =
        fs::temp_directory_path() / ("phifem_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    try {
        criteria_rates();
        criterion_condition();
        criterion_exactness();
        criterion_coercivity();
        criterion_classification();
        criterion_quadrature();
        criterion_variants();
        criterion_reference_convergence(scratch);
        criterion_determinism(scratch);
    } catch (const std::exception& e) {
        std::cout << "[FAIL] acceptance run aborted: " << e.what() << '\n';
        ++g_failures;
    }

    fs::remove_all(scratch);
    if (g_failures == 0) {
        std::cout << "acceptance: all criteria passed\n";
    } else {
        std::cout << "acceptance: " << g_failures
                  << " criterion(s) failed; see the project notes for the analysis of "
                     "the documented shortfalls\n";
    }
    return g_failures;
}
