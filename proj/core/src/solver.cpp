#include "phifem/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/SparseLU>

namespace phifem {

namespace {

using Clock = std::chrono::steady_clock;
using SparseLu = Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void factorize_or_throw(SparseLu& lu, const Eigen::SparseMatrix<double>& a,
                        const char* who) {
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success) {
        throw std::runtime_error(std::string(who) + ": factorization failed (" +
                                 lu.lastErrorMessage() + ")");
    }
}

// Tracks a power-iteration estimate; converged when the value moved less
// than rel_tol over the last `window` iterations.
class WindowedEstimate {
public:
    WindowedEstimate(int window, double rel_tol) : window_(window), rel_tol_(rel_tol) {}

    bool push(double value) {
        history_.push_back(value);
        const int m = static_cast<int>(history_.size());
        if (m <= window_) return false;
        const double old = history_[static_cast<size_t>(m - 1 - window_)];
        return std::abs(value - old) <= rel_tol_ * std::abs(value);
    }

private:
    int window_;
    double rel_tol_;
    std::vector<double> history_;
};

}  // namespace

Eigen::VectorXd gaussian_vector(int n, std::mt19937_64& rng) {
    Eigen::VectorXd v(n);
    const auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    for (int i = 0; i < n; i += 2) {
        const double u1 = std::max(uniform(), 1e-300);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        v[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < n) v[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    return v;
}

SolveReport solve(const LinearSystem& system, double tol) {
    const int n = system.size();
    if (n <= 0) throw std::invalid_argument("solve: empty system");
    if (system.matrix.rows() != n || system.matrix.cols() != n ||
        system.rhs.size() != n) {
        throw std::invalid_argument("solve: inconsistent system dimensions");
    }

    const auto t0 = Clock::now();
    SparseLu lu;
    factorize_or_throw(lu, system.matrix, "solve");

    Eigen::VectorXd x = lu.solve(system.rhs);
    if (lu.info() != Eigen::Success) {
        throw std::runtime_error("solve: back substitution failed");
    }

    const double bnorm = system.rhs.norm();
    const double denom = bnorm > 0.0 ? bnorm : 1.0;
    SolveReport report;
    Eigen::VectorXd residual = system.rhs - system.matrix * x;
    double rel = residual.norm() / denom;
    while (rel > tol && report.refinement_steps < 3) {
        const Eigen::VectorXd dx = lu.solve(residual);
        x += dx;
        residual = system.rhs - system.matrix * x;
        const double next = residual.norm() / denom;
        ++report.refinement_steps;
        if (next >= rel) break;  // stagnated
        rel = next;
    }
    if (rel > tol) {
        throw std::runtime_error("solve: residual stagnation at relative residual " +
                                 std::to_string(rel));
    }

    report.x = std::move(x);
    report.u = report.x.head(system.n_u);
    report.p = system.n_p > 0 ? Eigen::VectorXd(report.x.tail(system.n_p))
                              : Eigen::VectorXd();
    report.relative_residual = rel;
    report.solve_ms = ms_since(t0);
    return report;
}

double condition_estimate(const Eigen::SparseMatrix<double>& a, double tol,
                          std::uint64_t seed) {
    const int n = static_cast<int>(a.rows());
    if (n <= 0 || a.cols() != n) {
        throw std::invalid_argument("condition_estimate: matrix must be square and nonempty");
    }
    if (!(tol > 0.0)) throw std::invalid_argument("condition_estimate: tol must be > 0");

    SparseLu lu;
    factorize_or_throw(lu, a, "condition_estimate");
    const Eigen::SparseMatrix<double> at = a.transpose();
    SparseLu lut;
    factorize_or_throw(lut, at, "condition_estimate (transpose)");

    constexpr int kMaxIter = 10000;
    constexpr int kWindow = 20;
    const double step_tol = 0.2 * tol;
    std::mt19937_64 rng(seed);

    // Largest singular value: power iteration on A^T A.
    double sigma_max = 0.0;
    {
        Eigen::VectorXd v = gaussian_vector(n, rng).normalized();
        WindowedEstimate est(kWindow, step_tol);
        bool done = false;
        for (int it = 0; it < kMaxIter; ++it) {
            const Eigen::VectorXd w = a * v;
            sigma_max = w.norm();  // sqrt(v^T A^T A v) for unit v
            if (est.push(sigma_max)) {
                done = true;
                break;
            }
            const Eigen::VectorXd z = at * w;
            const double zn = z.norm();
            if (zn == 0.0) {
                throw std::runtime_error("condition_estimate: matrix annihilated the iterate");
            }
            v = z / zn;
        }
        if (!done) {
            throw std::runtime_error(
                "condition_estimate: sigma_max iteration did not converge within 10000 steps");
        }
    }

    // Smallest singular value: power iteration on (A^T A)^{-1} = A^{-1} A^{-T}.
    double sigma_min = 0.0;
    {
        Eigen::VectorXd v = gaussian_vector(n, rng).normalized();
        WindowedEstimate est(kWindow, step_tol);
        bool done = false;
        for (int it = 0; it < kMaxIter; ++it) {
            const Eigen::VectorXd y = lut.solve(v);
            if (lut.info() != Eigen::Success) {
                throw std::runtime_error("condition_estimate: transpose solve failed");
            }
            const double mu = y.squaredNorm();  // v^T A^{-1} A^{-T} v for unit v
            if (mu == 0.0) {
                throw std::runtime_error("condition_estimate: inverse iterate vanished");
            }
            sigma_min = 1.0 / std::sqrt(mu);
            if (est.push(sigma_min)) {
                done = true;
                break;
            }
            const Eigen::VectorXd z = lu.solve(y);
            if (lu.info() != Eigen::Success) {
                throw std::runtime_error("condition_estimate: solve failed");
            }
            const double zn = z.norm();
            if (zn == 0.0) {
                throw std::runtime_error("condition_estimate: inverse iterate vanished");
            }
            v = z / zn;
        }
        if (!done) {
            throw std::runtime_error(
                "condition_estimate: sigma_min iteration did not converge within 10000 steps");
        }
    }

    return sigma_max / sigma_min;
}

double condition_estimate(const LinearSystem& system, double tol, std::uint64_t seed) {
    return condition_estimate(system.matrix, tol, seed);
}

}  // namespace phifem
