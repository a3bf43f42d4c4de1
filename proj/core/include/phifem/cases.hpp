#pragma once

#include <string>
#include <vector>

#include "phifem/levelset.hpp"
#include "phifem/verification.hpp"

namespace phifem {

// Built-in problem definition: geometry through a level-set, source term,
// Dirichlet datum, optional manufactured solution, recommended parameters.
struct TestCase {
    std::string name;
    BoundingBox bbox;
    LevelSet phi;
    std::function<double(const Eigen::Vector2d&)> f;
    std::function<double(const Eigen::Vector2d&)> u_dirichlet;  // empty = 0
    ScalarField exact;  // value empty when only reference-based errors apply
    double gamma = 100.0;
    double sigma_d = 0.1;

    bool has_exact() const { return static_cast<bool>(exact.value); }
};

// Registry: "tc1", "disk-poly", "disk-exp", "patch-linear".
TestCase get_case(const std::string& name);
std::vector<std::string> case_names();

// Named analytic level-sets usable on their own: the five-bump product
// geometry of the tc1 case, circles, and half-planes.
LevelSet tc1_levelset();
LevelSet disk_levelset(const Eigen::Vector2d& center, double radius);
LevelSet halfplane_levelset(const Eigen::Vector2d& normal, double offset);
LevelSet named_levelset(const std::string& name);  // "tc1", "disk", "halfplane"

}  // namespace phifem
