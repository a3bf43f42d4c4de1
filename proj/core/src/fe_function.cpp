#include "phifem/fe_function.hpp"

#include <stdexcept>

namespace phifem {

FeFunction::FeFunction(const BackgroundGrid& grid, const DofMap& map,
                       Eigen::VectorXd coeffs)
    : grid_(&grid), map_(&map), coeffs_(std::move(coeffs)), elem_(map.degree()) {
    if (coeffs_.size() != map.num_dofs()) {
        throw std::invalid_argument("FeFunction: coefficient count does not match dof map");
    }
}

void FeFunction::local_coeffs(int cell, double* out) const {
    int dofs[6];
    map_->cell_dofs(cell, dofs);
    for (int i = 0; i < map_->dofs_per_cell(); ++i) out[i] = coeffs_[dofs[i]];
}

double FeFunction::value(int cell, const Eigen::Vector3d& bary) const {
    double local[6];
    local_coeffs(cell, local);
    const BasisEval be = elem_.eval(bary);
    double v = 0.0;
    for (int i = 0; i < be.n; ++i) v += local[i] * be.value[static_cast<size_t>(i)];
    return v;
}

Eigen::Vector2d FeFunction::gradient(int cell, const Eigen::Vector3d& bary) const {
    double local[6];
    local_coeffs(cell, local);
    const BasisEval be = elem_.eval(bary);
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int i = 0; i < be.n; ++i) g += local[i] * be.grad[static_cast<size_t>(i)];
    return grid_->cell_geometry(cell).jacobian_inv_t * g;
}

double FeFunction::laplacian(int cell, const Eigen::Vector3d& bary) const {
    if (map_->degree() == 1) return 0.0;
    double local[6];
    local_coeffs(cell, local);
    const BasisEval be = elem_.eval(bary);
    Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
    for (int i = 0; i < be.n; ++i) h += local[i] * be.hessian[static_cast<size_t>(i)];
    const Eigen::Matrix2d& jit = grid_->cell_geometry(cell).jacobian_inv_t;
    return (jit * h * jit.transpose()).trace();
}

}  // namespace phifem
