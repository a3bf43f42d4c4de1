#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "phifem/assembly.hpp"

namespace phifem {

// Deterministic standard-normal vector from the given generator (explicit
// Box-Muller; std::normal_distribution is implementation-defined).
Eigen::VectorXd gaussian_vector(int n, std::mt19937_64& rng);

struct SolveReport {
    Eigen::VectorXd x;  // full solution over (u; p)
    Eigen::VectorXd u;
    Eigen::VectorXd p;  // empty when the system has no auxiliary block
    double relative_residual = 0.0;
    double solve_ms = 0.0;
    double assembly_ms = 0.0;  // left to callers that time assembly
    int refinement_steps = 0;
};

// Sparse LU solve with iterative refinement until the relative residual
// meets tol. Deterministic for a fixed system. Throws on singular matrices
// (with the factorization's diagnostic) and on residual stagnation.
SolveReport solve(const LinearSystem& system, double tol = 1e-10);

// 2-norm condition number estimate: power iteration on A^T A for the largest
// singular value, inverse power iteration through LU solves with A and A^T
// for the smallest. Windowed stopping with relative tolerance tol, iteration
// cap 10000, deterministic seeded start vector.
double condition_estimate(const Eigen::SparseMatrix<double>& a, double tol = 0.01,
                          std::uint64_t seed = 0x5eed2024u);
double condition_estimate(const LinearSystem& system, double tol = 0.01,
                          std::uint64_t seed = 0x5eed2024u);

}  // namespace phifem
