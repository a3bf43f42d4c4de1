#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "phifem/cases.hpp"
#include "phifem/grid.hpp"
#include "phifem/levelset.hpp"

using namespace phifem;

namespace {

LevelSet affine_levelset(double a, double b, double c) {
    LevelSet ls;
    ls.value = [=](const Eigen::Vector2d& p) { return a * p.x() + b * p.y() + c; };
    ls.gradient = [=](const Eigen::Vector2d&) { return Eigen::Vector2d(a, b); };
    return ls;
}

// Brute-force reference classifier: sample phi_h on a dense barycentric
// lattice per cell and derive every set from the sampled signs.
struct OracleSets {
    std::vector<char> active;
    std::vector<char> cut;
};

OracleSets oracle_classify(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                           int samples_per_edge) {
    const double tau = 1e-12 * dls.max_abs_nodal();
    OracleSets out;
    out.active.assign(static_cast<size_t>(grid.num_cells()), 0);
    out.cut.assign(static_cast<size_t>(grid.num_cells()), 0);
    const int s = samples_per_edge;
    for (int c = 0; c < grid.num_cells(); ++c) {
        bool has_neg = false;
        bool has_pos = false;
        bool has_zero = false;
        for (int i = 0; i <= s; ++i) {
            for (int j = 0; i + j <= s; ++j) {
                const Eigen::Vector3d bary(1.0 - double(i + j) / s, double(i) / s,
                                           double(j) / s);
                const double v = dls.value_on_cell(c, bary);
                if (v < -tau) has_neg = true;
                else if (v > tau) has_pos = true;
                else has_zero = true;
            }
        }
        const bool active = has_neg || (has_zero && !has_pos && !has_neg);
        out.active[static_cast<size_t>(c)] = active ? 1 : 0;
        out.cut[static_cast<size_t>(c)] = (active && (has_pos || has_zero)) ? 1 : 0;
    }
    return out;
}

}  // namespace

TEST_CASE("degree-1 interpolation reproduces affine functions exactly") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 5, 4);
    const LevelSet ls = affine_levelset(2.0, -1.5, 0.3);
    const DiscreteLevelSet dls = interpolate_levelset(ls, g, 1);
    CHECK(dls.degree() == 1);
    for (int v = 0; v < g.num_vertices(); ++v) {
        CHECK(dls.vertex_value(v) == doctest::Approx(ls.value(g.vertex(v))).epsilon(1e-15));
    }
    std::mt19937_64 rng(3u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const int c = static_cast<int>(rng() % static_cast<unsigned>(g.num_cells()));
        double xi = uni(rng), eta = uni(rng) * (1.0 - xi);
        const Eigen::Vector3d bary(1.0 - xi - eta, xi, eta);
        const Eigen::Vector2d x = g.cell_point(c, bary);
        CHECK(dls.value_on_cell(c, bary) == doctest::Approx(ls.value(x)).epsilon(1e-13));
        CHECK((dls.gradient_on_cell(c, bary) - Eigen::Vector2d(2.0, -1.5)).norm() < 1e-12);
        CHECK(dls.laplacian_on_cell(c, bary) == 0.0);
    }
}

TEST_CASE("degree-2 interpolation reproduces quadratics exactly") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 4, 4);
    LevelSet ls;
    ls.value = [](const Eigen::Vector2d& p) {
        return p.x() * p.x() + 0.5 * p.y() * p.y() - 0.3 * p.x() * p.y() + p.x() - 0.2;
    };
    const DiscreteLevelSet dls = interpolate_levelset(ls, g, 2);
    CHECK(dls.degree() == 2);
    CHECK(dls.nodes_per_cell() == 6);
    std::mt19937_64 rng(5u);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int t = 0; t < 200; ++t) {
        const int c = static_cast<int>(rng() % static_cast<unsigned>(g.num_cells()));
        double xi = uni(rng), eta = uni(rng) * (1.0 - xi);
        const Eigen::Vector3d bary(1.0 - xi - eta, xi, eta);
        const Eigen::Vector2d x = g.cell_point(c, bary);
        CHECK(dls.value_on_cell(c, bary) == doctest::Approx(ls.value(x)).epsilon(1e-12));
        const Eigen::Vector2d grad_exact(2.0 * x.x() - 0.3 * x.y() + 1.0,
                                         x.y() - 0.3 * x.x());
        CHECK((dls.gradient_on_cell(c, bary) - grad_exact).norm() < 1e-11);
        CHECK(dls.laplacian_on_cell(c, bary) == doctest::Approx(3.0).epsilon(1e-10));
    }
}

TEST_CASE("a vertical interface splits a 2x2 grid into known sets") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 2, 2);
    const DiscreteLevelSet dls = interpolate_levelset(affine_levelset(1, 0, -0.51), g, 1);
    const CellSets sets = classify(dls);
    CHECK(sets.active.size() == 8);
    CHECK(sets.cut.size() == 4);
    CHECK(sets.strictly_interior.size() == 4);
    CHECK(sets.omega_h_boundary_facets.size() == 8);
    CHECK(sets.ghost_facets.size() == 5);
    CHECK(sets.connected);
    // the cut cells are exactly those with a vertex at x = 1
    for (int c : sets.cut) {
        const auto vs = g.cell_vertices(c);
        bool touches_right = false;
        for (int v : vs) touches_right |= g.vertex(v).x() > 0.9;
        CHECK(touches_right);
    }
    // set listings agree with the indicator vectors
    for (int c : sets.active) CHECK(sets.is_active[static_cast<size_t>(c)] == 1);
    for (int c : sets.cut) CHECK(sets.is_cut[static_cast<size_t>(c)] == 1);
}

TEST_CASE("classification matches a dense sampling oracle on affine level-sets") {
    std::mt19937_64 rng(0x600dcafeu);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int n : {4, 8}) {
        const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, n, n);
        for (int trial = 0; trial < 50; ++trial) {
            const double a = uni(rng), b = uni(rng), c = 0.7 * uni(rng);
            if (std::abs(a) + std::abs(b) < 0.1) continue;
            const DiscreteLevelSet dls =
                interpolate_levelset(affine_levelset(a, b, c), g, 1);
            bool domain_nonempty = false;
            for (int v = 0; v < g.num_vertices(); ++v) {
                domain_nonempty |= dls.vertex_value(v) < 0.0;
            }
            if (!domain_nonempty) {
                CHECK_THROWS_AS(classify(dls), std::runtime_error);
                continue;
            }
            const CellSets sets = classify(dls);
            const OracleSets oracle = oracle_classify(g, dls, 50);
            for (int cell = 0; cell < g.num_cells(); ++cell) {
                CHECK(sets.is_active[static_cast<size_t>(cell)] ==
                      oracle.active[static_cast<size_t>(cell)]);
                CHECK(sets.is_cut[static_cast<size_t>(cell)] ==
                      oracle.cut[static_cast<size_t>(cell)]);
            }
        }
    }
}

TEST_CASE("classification is invariant under positive scaling of the level-set") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 8, 8);
    const LevelSet disk = disk_levelset(Eigen::Vector2d(0.5, 0.5), 0.3125);
    const CellSets base = classify(interpolate_levelset(disk, g, 1));
    for (double lambda : {1e-6, 1e6}) {
        LevelSet scaled;
        scaled.value = [&disk, lambda](const Eigen::Vector2d& p) {
            return lambda * disk.value(p);
        };
        const CellSets s = classify(interpolate_levelset(scaled, g, 1));
        CHECK(s.active == base.active);
        CHECK(s.cut == base.cut);
        CHECK(s.ghost_facets == base.ghost_facets);
        CHECK(s.omega_h_boundary_facets == base.omega_h_boundary_facets);
    }
}

TEST_CASE("shifting the level-set grows the active region monotonically") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 8, 8);
    const LevelSet disk = disk_levelset(Eigen::Vector2d(0.5, 0.5), 0.3125);
    size_t prev = 0;
    for (double shift : {0.0, -0.01, -0.03}) {
        LevelSet shifted;
        shifted.value = [&disk, shift](const Eigen::Vector2d& p) {
            return disk.value(p) + shift;
        };
        const CellSets s = classify(interpolate_levelset(shifted, g, 1));
        CHECK(s.active.size() >= prev);
        prev = s.active.size();
    }
}

TEST_CASE("disconnected active regions are flagged") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 16, 16);
    LevelSet two_disks;
    two_disks.value = [](const Eigen::Vector2d& p) {
        const double d1 = (p - Eigen::Vector2d(0.22, 0.5)).squaredNorm() - 0.01;
        const double d2 = (p - Eigen::Vector2d(0.78, 0.5)).squaredNorm() - 0.01;
        return std::min(d1, d2);
    };
    const CellSets s = classify(interpolate_levelset(two_disks, g, 1));
    CHECK_FALSE(s.connected);

    const CellSets one = classify(
        interpolate_levelset(disk_levelset(Eigen::Vector2d(0.5, 0.5), 0.3), g, 1));
    CHECK(one.connected);
}

TEST_CASE("boundary facets separate active from inactive cells") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 12, 12);
    const DiscreteLevelSet dls =
        interpolate_levelset(disk_levelset(Eigen::Vector2d(0.5, 0.5), 0.3125), g, 1);
    const CellSets s = classify(dls);
    for (int f : s.omega_h_boundary_facets) {
        const auto fc = g.facet_cells(f);
        const bool a0 = s.is_active[static_cast<size_t>(fc[0])] != 0;
        const bool a1 = fc[1] >= 0 && s.is_active[static_cast<size_t>(fc[1])] != 0;
        CHECK(a0 != a1);
    }
    for (int f : s.ghost_facets) {
        const auto fc = g.facet_cells(f);
        REQUIRE(fc[1] >= 0);
        CHECK(s.is_active[static_cast<size_t>(fc[0])] == 1);
        CHECK(s.is_active[static_cast<size_t>(fc[1])] == 1);
        CHECK((s.is_cut[static_cast<size_t>(fc[0])] == 1 ||
               s.is_cut[static_cast<size_t>(fc[1])] == 1));
    }
    // ghost and boundary facet lists are sorted and disjoint
    CHECK(std::is_sorted(s.ghost_facets.begin(), s.ghost_facets.end()));
    CHECK(std::is_sorted(s.omega_h_boundary_facets.begin(),
                         s.omega_h_boundary_facets.end()));
    std::vector<int> inter;
    std::set_intersection(s.ghost_facets.begin(), s.ghost_facets.end(),
                          s.omega_h_boundary_facets.begin(),
                          s.omega_h_boundary_facets.end(), std::back_inserter(inter));
    CHECK(inter.empty());
}

TEST_CASE("an all-positive level-set yields no domain") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 4, 4);
    const DiscreteLevelSet dls = interpolate_levelset(affine_levelset(0, 0, 1.0), g, 1);
    CHECK_THROWS_AS(classify(dls), std::runtime_error);
}

TEST_CASE("interpolation rejects unsupported degrees") {
    const BackgroundGrid g = build_grid(BoundingBox{0.0, 0.0, 1.0, 1.0}, 4, 4);
    CHECK_THROWS_AS(interpolate_levelset(affine_levelset(1, 0, 0), g, 3),
                    std::invalid_argument);
    LevelSet empty;
    CHECK_THROWS_AS(interpolate_levelset(empty, g, 1), std::invalid_argument);
}
