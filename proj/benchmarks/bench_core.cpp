#include <benchmark/benchmark.h>

#include "phifem/assembly.hpp"
#include "phifem/cases.hpp"
#include "phifem/dofmap.hpp"
#include "phifem/fe_function.hpp"
#include "phifem/solver.hpp"
#include "phifem/verification.hpp"

using namespace phifem;

namespace {

struct Setup {
    BackgroundGrid grid;
    DiscreteLevelSet dls;
    CellSets sets;
    DofMap vh;
    DofMap qh;

    Setup(const TestCase& tc, int n, int k)
        : grid(build_grid(tc.bbox, n, n)),
          dls(interpolate_levelset(tc.phi, grid, k)),
          sets(classify(dls)) {
        auto maps = build_dofmaps(grid, sets, k);
        vh = std::move(maps.first);
        qh = std::move(maps.second);
    }
};

SchemeParams params_of(const TestCase& tc, int k) {
    SchemeParams p;
    p.gamma = tc.gamma;
    p.sigma_d = tc.sigma_d;
    p.k = k;
    p.l = k;
    return p;
}

}  // namespace

static void BM_BuildGrid(benchmark::State& state) {
    const BoundingBox box{0.0, 0.0, 1.0, 1.0};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_grid(box, n, n));
    }
}
BENCHMARK(BM_BuildGrid)->Arg(32)->Arg(128)->Arg(512);

static void BM_Classify(benchmark::State& state) {
    const TestCase tc = get_case("disk-poly");
    const int n = static_cast<int>(state.range(0));
    const BackgroundGrid grid = build_grid(tc.bbox, n, n);
    const DiscreteLevelSet dls = interpolate_levelset(tc.phi, grid, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify(dls));
    }
}
BENCHMARK(BM_Classify)->Arg(32)->Arg(128)->Arg(512);

static void BM_AssembleDual(benchmark::State& state) {
    const TestCase tc = get_case("disk-exp");
    const int n = static_cast<int>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const Setup s(tc, n, k);
    const SchemeParams params = params_of(tc, k);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            assemble_dual(s.grid, s.dls, s.sets, s.vh, s.qh, params, data));
    }
}
BENCHMARK(BM_AssembleDual)->Args({32, 1})->Args({64, 1})->Args({32, 2})->Args({64, 2});

static void BM_AssembleDirect(benchmark::State& state) {
    const TestCase tc = get_case("disk-exp");
    const int n = static_cast<int>(state.range(0));
    const Setup s(tc, n, 1);
    const SchemeParams params = params_of(tc, 1);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            assemble_direct(s.grid, s.dls, s.sets, s.vh, params, data));
    }
}
BENCHMARK(BM_AssembleDirect)->Arg(32)->Arg(64);

static void BM_Solve(benchmark::State& state) {
    const TestCase tc = get_case("disk-exp");
    const int n = static_cast<int>(state.range(0));
    const Setup s(tc, n, 1);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    const LinearSystem sys =
        assemble_dual(s.grid, s.dls, s.sets, s.vh, s.qh, params_of(tc, 1), data);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(sys));
    }
}
BENCHMARK(BM_Solve)->Arg(32)->Arg(64)->Arg(128);

static void BM_ComputeErrors(benchmark::State& state) {
    const TestCase tc = get_case("disk-exp");
    const int n = static_cast<int>(state.range(0));
    const Setup s(tc, n, 1);
    const SourceAndData data{tc.f, tc.u_dirichlet};
    const LinearSystem sys =
        assemble_dual(s.grid, s.dls, s.sets, s.vh, s.qh, params_of(tc, 1), data);
    const SolveReport sol = solve(sys);
    const FeFunction u(s.grid, s.vh, sol.u);
    const FieldOnGrid num = field_from_fe(u);
    const FieldOnGrid ref = field_from_analytic(tc.exact);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_errors(s.grid, s.sets, tc.phi, num, ref));
    }
}
BENCHMARK(BM_ComputeErrors)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
