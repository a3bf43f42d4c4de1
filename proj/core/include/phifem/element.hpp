#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace phifem {

/// Basis values, reference gradients and reference Hessians at one point.
/// Arrays are sized for the largest supported element (P2, 6 nodes).
struct BasisEval {
    int n = 0;
    std::array<double, 6> value{};
    std::array<Eigen::Vector2d, 6> grad{};
    std::array<Eigen::Matrix2d, 6> hessian{};
};

/// Lagrange reference element on the unit triangle, degree 1 or 2.
/// Node order: vertices 0,1,2 then (P2) midpoints of the edges opposite
/// vertices 0,1,2.
class ReferenceElement {
public:
    explicit ReferenceElement(int degree);

    int degree() const { return degree_; }
    int num_nodes() const { return degree_ == 1 ? 3 : 6; }

    /// Barycentric coordinates of node i.
    Eigen::Vector3d node(int i) const;

    BasisEval eval(const Eigen::Vector3d& bary) const;

private:
    int degree_;
};

/// Quadrature rule in barycentric coordinates. Triangle rules have weights
/// summing to the reference area 1/2; segment rules use points (1-t, t, 0)
/// with weights summing to 1.
struct QuadratureRule {
    int exactness = 0;
    std::vector<Eigen::Vector3d> points;
    std::vector<double> weights;
};

/// Rule exact for polynomials up to the requested total degree (<= 10).
/// All weights are positive.
QuadratureRule triangle_quadrature(int exactness);

/// Gauss-Legendre rule on the unit segment, exact up to degree 12.
QuadratureRule segment_quadrature(int exactness);

}  // namespace phifem
