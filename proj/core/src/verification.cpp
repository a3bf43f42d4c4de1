#include "phifem/verification.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "phifem/solver.hpp"

namespace phifem {

FieldOnGrid field_from_analytic(const ScalarField& f) {
    if (!f.value || !f.gradient) {
        throw std::invalid_argument("field_from_analytic: field needs value and gradient");
    }
    FieldOnGrid out;
    out.value = [f](int, const Eigen::Vector3d&, const Eigen::Vector2d& x) {
        return f.value(x);
    };
    out.gradient = [f](int, const Eigen::Vector3d&, const Eigen::Vector2d& x) {
        return f.gradient(x);
    };
    return out;
}

FieldOnGrid field_from_fe(const FeFunction& f) {
    FieldOnGrid out;
    out.value = [&f](int cell, const Eigen::Vector3d& bary, const Eigen::Vector2d&) {
        return f.value(cell, bary);
    };
    out.gradient = [&f](int cell, const Eigen::Vector3d& bary, const Eigen::Vector2d&) {
        return f.gradient(cell, bary);
    };
    return out;
}

FieldOnGrid field_from_fe_product(const DiscreteLevelSet& phi, const FeFunction& w,
                                  const FeFunction* lifting) {
    FieldOnGrid out;
    out.value = [&phi, &w, lifting](int cell, const Eigen::Vector3d& bary,
                                    const Eigen::Vector2d&) {
        double v = phi.value_on_cell(cell, bary) * w.value(cell, bary);
        if (lifting) v += lifting->value(cell, bary);
        return v;
    };
    out.gradient = [&phi, &w, lifting](int cell, const Eigen::Vector3d& bary,
                                       const Eigen::Vector2d&) {
        const auto [pv, pg] = phi.eval_on_cell(cell, bary);
        Eigen::Vector2d g = pv * w.gradient(cell, bary) + w.value(cell, bary) * pg;
        if (lifting) g += lifting->gradient(cell, bary);
        return g;
    };
    return out;
}

FieldOnGrid field_via_location(const BackgroundGrid& src_grid, const CellSets& src_sets,
                               FieldOnGrid src_field) {
    FieldOnGrid out;
    out.value = [&src_grid, src_field](int, const Eigen::Vector3d&,
                                       const Eigen::Vector2d& x) {
        const PointLocation loc = locate_point(src_grid, x);
        return src_field.value(loc.cell, loc.barycentric, x);
    };
    out.gradient = [&src_grid, src_field](int, const Eigen::Vector3d&,
                                          const Eigen::Vector2d& x) {
        const PointLocation loc = locate_point(src_grid, x);
        return src_field.gradient(loc.cell, loc.barycentric, x);
    };
    out.defined = [&src_grid, &src_sets](const Eigen::Vector2d& x) {
        const PointLocation loc = locate_point(src_grid, x);
        return src_sets.is_active[static_cast<size_t>(loc.cell)] != 0;
    };
    return out;
}

namespace {

using BaryTriangle = std::array<Eigen::Vector3d, 3>;

void split_triangle(const BaryTriangle& t, int depth, std::vector<BaryTriangle>& out) {
    if (depth == 0) {
        out.push_back(t);
        return;
    }
    const Eigen::Vector3d m01 = 0.5 * (t[0] + t[1]);
    const Eigen::Vector3d m12 = 0.5 * (t[1] + t[2]);
    const Eigen::Vector3d m02 = 0.5 * (t[0] + t[2]);
    split_triangle({t[0], m01, m02}, depth - 1, out);
    split_triangle({m01, t[1], m12}, depth - 1, out);
    split_triangle({m02, m12, t[2]}, depth - 1, out);
    split_triangle({m01, m12, m02}, depth - 1, out);
}

std::vector<BaryTriangle> subdivide_reference(int depth) {
    std::vector<BaryTriangle> out;
    split_triangle({Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(),
                    Eigen::Vector3d::UnitZ()},
                   depth, out);
    return out;
}

}  // namespace

ErrorReport compute_errors(const BackgroundGrid& grid, const CellSets& sets,
                           const LevelSet& phi, const FieldOnGrid& u_num,
                           const FieldOnGrid& u_ref, int subdivision,
                           RelativeTo relative_to) {
    if (!u_num.value || !u_num.gradient || !u_ref.value || !u_ref.gradient) {
        throw std::invalid_argument("compute_errors: missing field data");
    }
    if (!phi.value) {
        throw std::invalid_argument("compute_errors: missing analytic level-set");
    }
    if (subdivision < 0 || subdivision > 8) {
        throw std::invalid_argument("compute_errors: subdivision out of range");
    }

    const QuadratureRule interior_rule = triangle_quadrature(8);
    const QuadratureRule sub_rule = triangle_quadrature(4);
    const std::vector<BaryTriangle> subs = subdivide_reference(subdivision);
    const double sub_scale = 1.0 / static_cast<double>(1 << (2 * subdivision));

    double l2 = 0.0, h1 = 0.0, l2_den = 0.0, h1_den = 0.0;

    const auto add_point = [&](int cell, const Eigen::Vector3d& bary, double w) {
        const Eigen::Vector2d x = grid.cell_point(cell, bary);
        if (u_num.defined && !u_num.defined(x)) return;
        if (u_ref.defined && !u_ref.defined(x)) return;
        const double vn = u_num.value(cell, bary, x);
        const double vr = u_ref.value(cell, bary, x);
        const Eigen::Vector2d gn = u_num.gradient(cell, bary, x);
        const Eigen::Vector2d gr = u_ref.gradient(cell, bary, x);
        l2 += w * (vn - vr) * (vn - vr);
        h1 += w * (gn - gr).squaredNorm();
        const double vd = relative_to == RelativeTo::reference_field ? vr : vn;
        const Eigen::Vector2d gd = relative_to == RelativeTo::reference_field ? gr : gn;
        l2_den += w * vd * vd;
        h1_den += w * gd.squaredNorm();
    };

    for (int c : sets.strictly_interior) {
        const double jac = std::abs(grid.cell_geometry(c).det_jacobian);
        for (size_t q = 0; q < interior_rule.points.size(); ++q) {
            add_point(c, interior_rule.points[q], interior_rule.weights[q] * jac);
        }
    }
    for (int c : sets.cut) {
        const double jac = std::abs(grid.cell_geometry(c).det_jacobian);
        for (const BaryTriangle& st : subs) {
            for (size_t q = 0; q < sub_rule.points.size(); ++q) {
                const Eigen::Vector3d& p = sub_rule.points[q];
                const Eigen::Vector3d bary = p[0] * st[0] + p[1] * st[1] + p[2] * st[2];
                const Eigen::Vector2d x = grid.cell_point(c, bary);
                if (!(phi.value(x) < 0.0)) continue;
                add_point(c, bary, sub_rule.weights[q] * sub_scale * jac);
            }
        }
    }

    ErrorReport report;
    report.l2_abs = std::sqrt(l2);
    report.h1_abs = std::sqrt(h1);
    report.l2_denom = std::sqrt(l2_den);
    report.h1_denom = std::sqrt(h1_den);
    report.l2_rel = report.l2_denom > 0.0 ? report.l2_abs / report.l2_denom : report.l2_abs;
    report.h1_rel = report.h1_denom > 0.0 ? report.h1_abs / report.h1_denom : report.h1_abs;
    report.h = grid.mesh_size();
    return report;
}

TripleNormBreakdown triple_norm(const FeFunction& u, const FeFunction* p,
                                const DiscreteLevelSet& dls, const CellSets& sets) {
    const BackgroundGrid& grid = u.grid();
    if (&dls.grid() != &grid || (p && &p->grid() != &grid)) {
        throw std::invalid_argument("triple_norm: fields live on different grids");
    }
    const int k = u.dofmap().degree();
    const int l = dls.degree();
    const double h = grid.mesh_size();

    const QuadratureRule plain_rule = triangle_quadrature(2 * k);
    const QuadratureRule cut_rule = triangle_quadrature(std::min(2 * k + 2 * l + 2, 10));
    const QuadratureRule seg_rule = segment_quadrature(2 * k + 1);

    TripleNormBreakdown tn;

    for (int c : sets.active) {
        const bool cut = sets.is_cut[static_cast<size_t>(c)] != 0;
        const QuadratureRule& rule = cut ? cut_rule : plain_rule;
        const double jac = std::abs(grid.cell_geometry(c).det_jacobian);
        for (size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * jac;
            tn.h1 += w * u.gradient(c, rule.points[q]).squaredNorm();
            if (!cut) continue;
            const double uv = u.value(c, rule.points[q]);
            const double pv = p && p->defined_on(c) ? p->value(c, rule.points[q]) : 0.0;
            const double phi = dls.value_on_cell(c, rule.points[q]);
            const double gap = uv - phi * pv / h;
            tn.penalty += w * gap * gap / (h * h);
            if (k == 2) {
                const double lap = u.laplacian(c, rule.points[q]);
                tn.second_order += w * h * h * lap * lap;
            }
        }
    }

    for (int f : sets.ghost_facets) {
        const auto& fc = grid.facet_cells(f);
        const int cl = std::min(fc[0], fc[1]);
        const int ch = std::max(fc[0], fc[1]);
        const int le = grid.facet_local_edge(f, cl);
        const CellGeometry gl = grid.cell_geometry(cl);
        const Eigen::Vector2d n = gl.edge_normal[static_cast<size_t>(le)];
        const double len = gl.edge_length[static_cast<size_t>(le)];
        for (size_t q = 0; q < seg_rule.points.size(); ++q) {
            const double t = seg_rule.points[q][1];
            const double jump =
                n.dot(u.gradient(cl, facet_point_barycentric(grid, f, cl, t))) -
                n.dot(u.gradient(ch, facet_point_barycentric(grid, f, ch, t)));
            tn.jump += h * seg_rule.weights[q] * len * jump * jump;
        }
    }

    tn.total = std::sqrt(tn.h1 + tn.penalty + tn.jump + tn.second_order);
    return tn;
}

LinearSystem triple_norm_gram(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                              const CellSets& sets, const DofMap& vh, const DofMap& qh) {
    SchemeParams params;
    params.gamma = 1.0;
    params.sigma_d = 1.0;
    params.k = vh.degree();
    params.l = dls.degree();
    params.second_order_stab = Stab2::on;
    params.include_boundary_term = false;
    return assemble_dual(grid, dls, sets, vh, qh, params, SourceAndData{});
}

CoercivityReport coercivity_ratio(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                                  const CellSets& sets, const DofMap& vh,
                                  const DofMap& qh, const SchemeParams& params,
                                  int n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("coercivity_ratio: n_samples < 1");
    const LinearSystem a = assemble_dual(grid, dls, sets, vh, qh, params, SourceAndData{});
    const LinearSystem g = triple_norm_gram(grid, dls, sets, vh, qh);
    const int n = a.size();

    CoercivityReport report;
    report.quotients.reserve(static_cast<size_t>(n_samples));
    std::mt19937_64 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        const Eigen::VectorXd x = gaussian_vector(n, rng);
        const double denom = x.dot(g.matrix * x);
        if (!(denom > 0.0)) {
            throw std::runtime_error("coercivity_ratio: sample with zero energy norm");
        }
        const double quot = x.dot(a.matrix * x) / denom;
        report.quotients.push_back(quot);
        if (report.argmin_sample < 0 || quot < report.min_quotient) {
            report.min_quotient = quot;
            report.argmin_sample = s;
        }
    }
    return report;
}

double fit_rate(const std::vector<std::pair<double, double>>& h_and_error) {
    if (h_and_error.size() < 2) {
        throw std::invalid_argument("fit_rate: need at least two points");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [h, e] : h_and_error) {
        if (!(h > 0.0) || !(e > 0.0)) {
            throw std::invalid_argument("fit_rate: inputs must be positive");
        }
        const double x = std::log(h);
        const double y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(h_and_error.size());
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) {
        throw std::invalid_argument("fit_rate: mesh sizes are all equal");
    }
    return (m * sxy - sx * sy) / denom;
}

}  // namespace phifem
