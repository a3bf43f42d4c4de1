#pragma once

#include <Eigen/Dense>

#include "phifem/dofmap.hpp"
#include "phifem/element.hpp"
#include "phifem/grid.hpp"

namespace phifem {

// Finite element function: a coefficient vector over a DOF map, evaluable
// cell-wise. Works for both the continuous and the element-wise map.
class FeFunction {
public:
    FeFunction(const BackgroundGrid& grid, const DofMap& map, Eigen::VectorXd coeffs);

    const BackgroundGrid& grid() const { return *grid_; }
    const DofMap& dofmap() const { return *map_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }

    bool defined_on(int cell) const { return map_->cell_has_dofs(cell); }

    double value(int cell, const Eigen::Vector3d& bary) const;
    Eigen::Vector2d gradient(int cell, const Eigen::Vector3d& bary) const;
    double laplacian(int cell, const Eigen::Vector3d& bary) const;

private:
    void local_coeffs(int cell, double* out) const;

    const BackgroundGrid* grid_;
    const DofMap* map_;
    Eigen::VectorXd coeffs_;
    ReferenceElement elem_;
};

}  // namespace phifem
