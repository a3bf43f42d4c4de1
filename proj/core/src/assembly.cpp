#include "phifem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "phifem/element.hpp"

namespace phifem {

bool second_order_stab_enabled(const SchemeParams& params) {
    switch (params.second_order_stab) {
        case Stab2::on: return true;
        case Stab2::off: return false;
        case Stab2::automatic: return params.k == 2;
    }
    return false;
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Sort by (row, col, value) and sum runs. Including the value in the key
// makes the per-entry summation order independent of generation order, so
// permuting cells or facets cannot change the result bitwise.
Eigen::SparseMatrix<double> canonical_matrix(int rows, int cols,
                                             std::vector<Triplet>& trips) {
    std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
        if (a.row() != b.row()) return a.row() < b.row();
        if (a.col() != b.col()) return a.col() < b.col();
        return a.value() < b.value();
    });
    std::vector<Triplet> reduced;
    for (size_t i = 0; i < trips.size();) {
        size_t j = i;
        double sum = 0.0;
        while (j < trips.size() && trips[j].row() == trips[i].row() &&
               trips[j].col() == trips[i].col()) {
            sum += trips[j].value();
            ++j;
        }
        reduced.emplace_back(trips[i].row(), trips[i].col(), sum);
        i = j;
    }
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(reduced.begin(), reduced.end());
    m.makeCompressed();
    return m;
}

Eigen::VectorXd canonical_vector(int n, std::vector<std::pair<int, double>>& entries) {
    std::sort(entries.begin(), entries.end());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (const auto& [i, val] : entries) v[i] += val;
    return v;
}

Eigen::Vector3d facet_point_bary(const BackgroundGrid& grid, int facet, int cell,
                                 double t) {
    return facet_point_barycentric(grid, facet, cell, t);
}

double cell_diameter(const CellGeometry& g) {
    return std::max({g.edge_length[0], g.edge_length[1], g.edge_length[2]});
}

void validate_inputs(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                     const CellSets& sets, const DofMap& vh,
                     const SchemeParams& params) {
    if (!(params.gamma > 0.0)) throw std::invalid_argument("assemble: gamma must be > 0");
    if (!(params.sigma_d > 0.0)) throw std::invalid_argument("assemble: sigma_d must be > 0");
    if (params.k != 1 && params.k != 2) throw std::invalid_argument("assemble: k must be 1 or 2");
    if (params.l != 1 && params.l != 2) throw std::invalid_argument("assemble: l must be 1 or 2");
    if (&dls.grid() != &grid) {
        throw std::invalid_argument("assemble: level-set lives on a different grid");
    }
    if (dls.degree() != params.l) {
        throw std::invalid_argument("assemble: level-set degree does not match params.l");
    }
    if (vh.degree() != params.k) {
        throw std::invalid_argument("assemble: dof map degree does not match params.k");
    }
    if (sets.active.empty()) throw std::runtime_error("assemble: no active cells");
    if (static_cast<int>(sets.is_active.size()) != grid.num_cells()) {
        throw std::invalid_argument("assemble: cell sets built on a different grid");
    }
}

struct VolumeRule {
    QuadratureRule rule;
    std::vector<BasisEval> bk;  // degree-k basis at the rule points
    std::vector<BasisEval> bl;  // degree-l basis, filled on demand
};

VolumeRule make_volume_rule(int exactness, const ReferenceElement& ek,
                            const ReferenceElement* el) {
    VolumeRule vr;
    vr.rule = triangle_quadrature(exactness);
    for (const Eigen::Vector3d& p : vr.rule.points) {
        vr.bk.push_back(ek.eval(p));
        if (el) vr.bl.push_back(el->eval(p));
    }
    return vr;
}

double physical_laplacian(const Eigen::Matrix2d& jit, const Eigen::Matrix2d& ref_hess) {
    return (jit * ref_hess * jit.transpose()).trace();
}

}  // namespace

Eigen::SparseMatrix<double> LinearSystem::uu_block() const {
    if (n_p == 0) return matrix;
    std::vector<Triplet> trips;
    for (int col = 0; col < n_u; ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it) {
            if (it.row() < n_u) trips.emplace_back(static_cast<int>(it.row()), col, it.value());
        }
    }
    Eigen::SparseMatrix<double> m(n_u, n_u);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

LinearSystem assemble_dual(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                           const CellSets& sets, const DofMap& vh, const DofMap& qh,
                           const SchemeParams& params, const SourceAndData& data) {
    validate_inputs(grid, dls, sets, vh, params);
    if (qh.degree() != params.k) {
        throw std::invalid_argument("assemble_dual: auxiliary map degree mismatch");
    }

    const int k = params.k;
    const int nk = vh.dofs_per_cell();
    const bool stab2 = second_order_stab_enabled(params) && k == 2;
    const double h_global = grid.mesh_size();
    const int n_u = vh.num_dofs();
    const int n_p = qh.num_dofs();

    const ReferenceElement ek(k);
    const ReferenceElement el(params.l);
    const int qe_plain = params.quadrature.volume_plain > 0 ? params.quadrature.volume_plain
                                                            : 2 * k;
    const int qe_cut = params.quadrature.volume_cut > 0
                           ? params.quadrature.volume_cut
                           : std::min(2 * k + 2 * params.l + 2, 10);
    const int qe_seg = params.quadrature.segment > 0 ? params.quadrature.segment : 2 * k + 1;

    const VolumeRule plain = make_volume_rule(qe_plain, ek, nullptr);
    const VolumeRule cutr = make_volume_rule(qe_cut, ek, &el);
    const QuadratureRule seg = segment_quadrature(qe_seg);

    std::vector<Triplet> trips;
    trips.reserve(sets.active.size() * static_cast<size_t>(nk * nk) * plain.rule.points.size() +
                  sets.cut.size() * static_cast<size_t>(4 * nk * nk) * cutr.rule.points.size());
    std::vector<std::pair<int, double>> rhs_entries;

    int dofs_u[6];
    int dofs_p[6];
    double phi_nodal[6];
    Eigen::Vector2d gp[6];
    double lap[6];

    for (int c : sets.active) {
        const bool cut = sets.is_cut[static_cast<size_t>(c)] != 0;
        const VolumeRule& vr = cut ? cutr : plain;
        const CellGeometry& G = grid.cell_geometry(c);
        const double jac = std::abs(G.det_jacobian);
        const double h = params.per_cell_h ? cell_diameter(G) : h_global;
        const double pen = params.gamma / (h * h);
        vh.cell_dofs(c, dofs_u);
        if (cut) {
            qh.cell_dofs(c, dofs_p);
            dls.cell_nodal_values(c, phi_nodal);
        }

        for (size_t q = 0; q < vr.rule.points.size(); ++q) {
            const double w = vr.rule.weights[q] * jac;
            const BasisEval& be = vr.bk[q];
            for (int i = 0; i < nk; ++i) {
                gp[i] = G.jacobian_inv_t * be.grad[static_cast<size_t>(i)];
            }
            const Eigen::Vector2d x = grid.cell_point(c, vr.rule.points[q]);
            const double fval = data.f ? data.f(x) : 0.0;

            for (int i = 0; i < nk; ++i) {
                for (int j = 0; j < nk; ++j) {
                    trips.emplace_back(dofs_u[i], dofs_u[j], w * gp[j].dot(gp[i]));
                }
                if (fval != 0.0) {
                    rhs_entries.emplace_back(dofs_u[i], w * fval * be.value[static_cast<size_t>(i)]);
                }
            }
            if (!cut) continue;

            const BasisEval& bl = vr.bl[q];
            double phi = 0.0;
            for (int i = 0; i < bl.n; ++i) phi += phi_nodal[i] * bl.value[static_cast<size_t>(i)];
            const double u_d = data.u_dirichlet ? data.u_dirichlet(x) : 0.0;

            for (int i = 0; i < nk; ++i) {
                const double ni = be.value[static_cast<size_t>(i)];
                for (int j = 0; j < nk; ++j) {
                    const double nj = be.value[static_cast<size_t>(j)];
                    trips.emplace_back(dofs_u[i], dofs_u[j], pen * w * nj * ni);
                    const double coupling = pen / h * w * phi * nj * ni;
                    trips.emplace_back(dofs_u[i], n_u + dofs_p[j], -coupling);
                    trips.emplace_back(n_u + dofs_p[j], dofs_u[i], -coupling);
                    trips.emplace_back(n_u + dofs_p[i], n_u + dofs_p[j],
                                       pen / (h * h) * w * phi * phi * nj * ni);
                }
                if (u_d != 0.0) {
                    rhs_entries.emplace_back(dofs_u[i], pen * w * u_d * ni);
                    rhs_entries.emplace_back(n_u + dofs_p[i], -pen / h * w * u_d * phi * ni);
                }
            }

            if (stab2) {
                for (int i = 0; i < nk; ++i) {
                    lap[i] = physical_laplacian(G.jacobian_inv_t, be.hessian[static_cast<size_t>(i)]);
                }
                const double s2 = params.sigma_d * h * h;
                for (int i = 0; i < nk; ++i) {
                    for (int j = 0; j < nk; ++j) {
                        trips.emplace_back(dofs_u[i], dofs_u[j], s2 * w * lap[j] * lap[i]);
                    }
                    if (fval != 0.0) {
                        rhs_entries.emplace_back(dofs_u[i], -s2 * w * fval * lap[i]);
                    }
                }
            }
        }
    }

    if (params.include_boundary_term) {
        for (int f : sets.omega_h_boundary_facets) {
            const auto fc = grid.facet_cells(f);
            const int c = sets.is_active[static_cast<size_t>(fc[0])] ? fc[0] : fc[1];
            const int le = grid.facet_local_edge(f, c);
            const CellGeometry& G = grid.cell_geometry(c);
            const Eigen::Vector2d n = G.edge_normal[static_cast<size_t>(le)];
            const double len = G.edge_length[static_cast<size_t>(le)];
            vh.cell_dofs(c, dofs_u);
            for (size_t q = 0; q < seg.points.size(); ++q) {
                const double t = seg.points[q][1];
                const BasisEval be = ek.eval(facet_point_bary(grid, f, c, t));
                const double w = seg.weights[q] * len;
                for (int i = 0; i < nk; ++i) {
                    gp[i] = G.jacobian_inv_t * be.grad[static_cast<size_t>(i)];
                }
                for (int i = 0; i < nk; ++i) {
                    for (int j = 0; j < nk; ++j) {
                        trips.emplace_back(dofs_u[i], dofs_u[j],
                                           -w * n.dot(gp[j]) * be.value[static_cast<size_t>(i)]);
                    }
                }
            }
        }
    }

    {
        int dl[6];
        int dh[6];
        int gd[12];
        double gj[12];
        for (int f : sets.ghost_facets) {
            const auto fc = grid.facet_cells(f);
            const int cl = std::min(fc[0], fc[1]);
            const int ch = std::max(fc[0], fc[1]);
            const CellGeometry& Gl = grid.cell_geometry(cl);
            const CellGeometry& Gh = grid.cell_geometry(ch);
            const int le_l = grid.facet_local_edge(f, cl);
            const Eigen::Vector2d n = Gl.edge_normal[static_cast<size_t>(le_l)];
            const double len = Gl.edge_length[static_cast<size_t>(le_l)];
            const double hf = params.per_cell_h
                                  ? std::max(cell_diameter(Gl), cell_diameter(Gh))
                                  : h_global;
            vh.cell_dofs(cl, dl);
            vh.cell_dofs(ch, dh);
            for (int i = 0; i < nk; ++i) {
                gd[i] = dl[i];
                gd[nk + i] = dh[i];
            }
            for (size_t q = 0; q < seg.points.size(); ++q) {
                const double t = seg.points[q][1];
                const BasisEval bel = ek.eval(facet_point_bary(grid, f, cl, t));
                const BasisEval beh = ek.eval(facet_point_bary(grid, f, ch, t));
                for (int i = 0; i < nk; ++i) {
                    gj[i] = n.dot(Gl.jacobian_inv_t * bel.grad[static_cast<size_t>(i)]);
                    gj[nk + i] = -n.dot(Gh.jacobian_inv_t * beh.grad[static_cast<size_t>(i)]);
                }
                const double coeff = params.sigma_d * hf * seg.weights[q] * len;
                for (int a = 0; a < 2 * nk; ++a) {
                    for (int b = 0; b < 2 * nk; ++b) {
                        trips.emplace_back(gd[a], gd[b], coeff * gj[a] * gj[b]);
                    }
                }
            }
        }
    }

    LinearSystem sys;
    sys.n_u = n_u;
    sys.n_p = n_p;
    sys.matrix = canonical_matrix(n_u + n_p, n_u + n_p, trips);
    sys.rhs = canonical_vector(n_u + n_p, rhs_entries);
    return sys;
}

LinearSystem assemble_direct(const BackgroundGrid& grid, const DiscreteLevelSet& dls,
                             const CellSets& sets, const DofMap& vh,
                             const SchemeParams& params, const SourceAndData& data) {
    validate_inputs(grid, dls, sets, vh, params);

    const int k = params.k;
    const int l = params.l;
    const int nk = vh.dofs_per_cell();
    const bool stab2 = second_order_stab_enabled(params);
    const double h_global = grid.mesh_size();
    const int n_u = vh.num_dofs();

    const ReferenceElement ek(k);
    const ReferenceElement el(l);
    const int qe_default = std::min(2 * (k + l) + 2, 10);
    const int qe_plain = params.quadrature.volume_plain > 0 ? params.quadrature.volume_plain
                                                            : qe_default;
    const int qe_cut = params.quadrature.volume_cut > 0 ? params.quadrature.volume_cut
                                                        : qe_default;
    const int qe_seg = params.quadrature.segment > 0 ? params.quadrature.segment
                                                     : std::min(2 * (k + l) - 1, 12);

    const VolumeRule plain = make_volume_rule(qe_plain, ek, &el);
    const VolumeRule cutr = make_volume_rule(qe_cut, ek, &el);
    const QuadratureRule seg = segment_quadrature(qe_seg);

    // Lifting of the Dirichlet datum: nodal interpolant on the active cells,
    // so u = phi_h w + g and the g-dependent terms move to the right side.
    Eigen::VectorXd gcoef;
    const bool has_g = static_cast<bool>(data.u_dirichlet);
    if (has_g) {
        gcoef.resize(n_u);
        for (int d = 0; d < n_u; ++d) gcoef[d] = data.u_dirichlet(vh.dof_point(d));
    }

    std::vector<Triplet> trips;
    trips.reserve(sets.active.size() * static_cast<size_t>(nk * nk) * plain.rule.points.size());
    std::vector<std::pair<int, double>> rhs_entries;

    int dofs[6];
    double phi_nodal[6];
    double pv[6];            // phi N_i
    Eigen::Vector2d pg[6];   // grad(phi N_i)
    double pl[6];            // lap(phi N_i)

    for (int c : sets.active) {
        const bool cut = sets.is_cut[static_cast<size_t>(c)] != 0;
        const VolumeRule& vr = cut ? cutr : plain;
        const CellGeometry& G = grid.cell_geometry(c);
        const double jac = std::abs(G.det_jacobian);
        const double h = params.per_cell_h ? cell_diameter(G) : h_global;
        vh.cell_dofs(c, dofs);
        dls.cell_nodal_values(c, phi_nodal);
        const bool with_stab2 = stab2 && cut;

        for (size_t q = 0; q < vr.rule.points.size(); ++q) {
            const double w = vr.rule.weights[q] * jac;
            const BasisEval& be = vr.bk[q];
            const BasisEval& bl = vr.bl[q];

            double phi = 0.0;
            Eigen::Vector2d phi_grad_ref = Eigen::Vector2d::Zero();
            Eigen::Matrix2d phi_hess_ref = Eigen::Matrix2d::Zero();
            for (int i = 0; i < bl.n; ++i) {
                phi += phi_nodal[i] * bl.value[static_cast<size_t>(i)];
                phi_grad_ref += phi_nodal[i] * bl.grad[static_cast<size_t>(i)];
                if (l == 2) phi_hess_ref += phi_nodal[i] * bl.hessian[static_cast<size_t>(i)];
            }
            const Eigen::Vector2d phi_grad = G.jacobian_inv_t * phi_grad_ref;
            const double phi_lap =
                l == 2 ? physical_laplacian(G.jacobian_inv_t, phi_hess_ref) : 0.0;

            for (int i = 0; i < nk; ++i) {
                const double ni = be.value[static_cast<size_t>(i)];
                const Eigen::Vector2d gi = G.jacobian_inv_t * be.grad[static_cast<size_t>(i)];
                pv[i] = phi * ni;
                pg[i] = phi * gi + ni * phi_grad;
                if (with_stab2) {
                    const double li =
                        k == 2 ? physical_laplacian(G.jacobian_inv_t, be.hessian[static_cast<size_t>(i)])
                               : 0.0;
                    pl[i] = phi * li + 2.0 * phi_grad.dot(gi) + ni * phi_lap;
                }
            }

            const Eigen::Vector2d x = grid.cell_point(c, vr.rule.points[q]);
            const double fval = data.f ? data.f(x) : 0.0;

            double gval = 0.0;
            Eigen::Vector2d ggrad = Eigen::Vector2d::Zero();
            double glap = 0.0;
            if (has_g) {
                for (int i = 0; i < nk; ++i) {
                    const double gc = gcoef[dofs[i]];
                    gval += gc * be.value[static_cast<size_t>(i)];
                    ggrad += gc * (G.jacobian_inv_t * be.grad[static_cast<size_t>(i)]);
                    if (with_stab2 && k == 2) {
                        glap += gc * physical_laplacian(G.jacobian_inv_t,
                                                        be.hessian[static_cast<size_t>(i)]);
                    }
                }
            }

            const double s2 = params.sigma_d * h * h;
            for (int i = 0; i < nk; ++i) {
                for (int j = 0; j < nk; ++j) {
                    double v = w * pg[j].dot(pg[i]);
                    if (with_stab2) v += s2 * w * pl[j] * pl[i];
                    trips.emplace_back(dofs[i], dofs[j], v);
                }
                double r = 0.0;
                if (fval != 0.0) {
                    r += w * fval * pv[i];
                    if (with_stab2) r -= s2 * w * fval * pl[i];
                }
                if (has_g) {
                    r -= w * ggrad.dot(pg[i]);
                    if (with_stab2) r -= s2 * w * glap * pl[i];
                }
                if (r != 0.0) rhs_entries.emplace_back(dofs[i], r);
            }
        }
    }

    if (params.include_boundary_term) {
        for (int f : sets.omega_h_boundary_facets) {
            const auto fc = grid.facet_cells(f);
            const int c = sets.is_active[static_cast<size_t>(fc[0])] ? fc[0] : fc[1];
            const int le = grid.facet_local_edge(f, c);
            const CellGeometry& G = grid.cell_geometry(c);
            const Eigen::Vector2d n = G.edge_normal[static_cast<size_t>(le)];
            const double len = G.edge_length[static_cast<size_t>(le)];
            vh.cell_dofs(c, dofs);
            dls.cell_nodal_values(c, phi_nodal);
            for (size_t q = 0; q < seg.points.size(); ++q) {
                const double t = seg.points[q][1];
                const Eigen::Vector3d bary = facet_point_bary(grid, f, c, t);
                const BasisEval be = ek.eval(bary);
                const BasisEval bphi = el.eval(bary);
                double phi = 0.0;
                Eigen::Vector2d phi_grad_ref = Eigen::Vector2d::Zero();
                for (int i = 0; i < bphi.n; ++i) {
                    phi += phi_nodal[i] * bphi.value[static_cast<size_t>(i)];
                    phi_grad_ref += phi_nodal[i] * bphi.grad[static_cast<size_t>(i)];
                }
                const Eigen::Vector2d phi_grad = G.jacobian_inv_t * phi_grad_ref;
                const double w = seg.weights[q] * len;
                double gflux = 0.0;
                for (int i = 0; i < nk; ++i) {
                    const double ni = be.value[static_cast<size_t>(i)];
                    const Eigen::Vector2d gi = G.jacobian_inv_t * be.grad[static_cast<size_t>(i)];
                    pv[i] = phi * ni;
                    pg[i] = phi * gi + ni * phi_grad;
                    if (has_g) gflux += gcoef[dofs[i]] * n.dot(gi);
                }
                for (int i = 0; i < nk; ++i) {
                    for (int j = 0; j < nk; ++j) {
                        trips.emplace_back(dofs[i], dofs[j], -w * n.dot(pg[j]) * pv[i]);
                    }
                    if (has_g) rhs_entries.emplace_back(dofs[i], w * gflux * pv[i]);
                }
            }
        }
    }

    {
        int dl_[6];
        int dh_[6];
        int gd[12];
        double gj[12];
        for (int f : sets.ghost_facets) {
            const auto fc = grid.facet_cells(f);
            const int cl = std::min(fc[0], fc[1]);
            const int ch = std::max(fc[0], fc[1]);
            const CellGeometry& Gl = grid.cell_geometry(cl);
            const CellGeometry& Gh = grid.cell_geometry(ch);
            const int le_l = grid.facet_local_edge(f, cl);
            const Eigen::Vector2d n = Gl.edge_normal[static_cast<size_t>(le_l)];
            const double len = Gl.edge_length[static_cast<size_t>(le_l)];
            const double hf = params.per_cell_h
                                  ? std::max(cell_diameter(Gl), cell_diameter(Gh))
                                  : h_global;
            vh.cell_dofs(cl, dl_);
            vh.cell_dofs(ch, dh_);
            for (int i = 0; i < nk; ++i) {
                gd[i] = dl_[i];
                gd[nk + i] = dh_[i];
            }
            double phi_l[6];
            double phi_h[6];
            dls.cell_nodal_values(cl, phi_l);
            dls.cell_nodal_values(ch, phi_h);
            for (size_t q = 0; q < seg.points.size(); ++q) {
                const double t = seg.points[q][1];
                double gjump = 0.0;
                for (int side = 0; side < 2; ++side) {
                    const int c = side == 0 ? cl : ch;
                    const CellGeometry& G = side == 0 ? Gl : Gh;
                    const double* pn = side == 0 ? phi_l : phi_h;
                    const int* dd = side == 0 ? dl_ : dh_;
                    const double sign = side == 0 ? 1.0 : -1.0;
                    const Eigen::Vector3d bary = facet_point_bary(grid, f, c, t);
                    const BasisEval be = ek.eval(bary);
                    const BasisEval bphi = el.eval(bary);
                    double phi = 0.0;
                    Eigen::Vector2d phi_grad_ref = Eigen::Vector2d::Zero();
                    for (int i = 0; i < bphi.n; ++i) {
                        phi += pn[i] * bphi.value[static_cast<size_t>(i)];
                        phi_grad_ref += pn[i] * bphi.grad[static_cast<size_t>(i)];
                    }
                    const Eigen::Vector2d phi_grad = G.jacobian_inv_t * phi_grad_ref;
                    for (int i = 0; i < nk; ++i) {
                        const Eigen::Vector2d gi = G.jacobian_inv_t * be.grad[static_cast<size_t>(i)];
                        const Eigen::Vector2d pgi =
                            phi * gi + be.value[static_cast<size_t>(i)] * phi_grad;
                        gj[side * nk + i] = sign * n.dot(pgi);
                        if (has_g) gjump += sign * gcoef[dd[i]] * n.dot(gi);
                    }
                }
                const double coeff = params.sigma_d * hf * seg.weights[q] * len;
                for (int a = 0; a < 2 * nk; ++a) {
                    for (int b = 0; b < 2 * nk; ++b) {
                        trips.emplace_back(gd[a], gd[b], coeff * gj[a] * gj[b]);
                    }
                    if (has_g) rhs_entries.emplace_back(gd[a], -coeff * gjump * gj[a]);
                }
            }
        }
    }

    LinearSystem sys;
    sys.n_u = n_u;
    sys.n_p = 0;
    sys.matrix = canonical_matrix(n_u, n_u, trips);
    sys.rhs = canonical_vector(n_u, rhs_entries);
    return sys;
}

void write_matrix_market(const Eigen::SparseMatrix<double>& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_matrix_market: cannot open " + path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
    out.precision(17);
    for (int col = 0; col < m.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, col); it; ++it) {
            out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
        }
    }
    if (!out.good()) throw std::runtime_error("write_matrix_market: write failed");
}

}  // namespace phifem
