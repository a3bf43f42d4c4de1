#include "phifem/cases.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace phifem {

namespace {

constexpr double kDiskRadius = 0.3125;
const Eigen::Vector2d kDiskCenter(0.5, 0.5);

struct Bump {
    double x0, y0, lx, ly, theta;
};

// Five rotated Gaussian bumps whose product carves the tc1 geometry.
constexpr std::array<Bump, 5> kBumps = {{
    {0.356, 0.507, 0.145, 0.171, 0.000},
    {0.588, 0.589, 0.153, 0.090, 0.000},
    {0.569, 0.588, 0.008, 0.008, 0.006},
    {0.308, 0.443, 0.055, 0.116, 0.622},
    {0.741, 0.643, 0.058, 0.035, 0.000},
}};

double disk_phi(const Eigen::Vector2d& p) {
    return (p - kDiskCenter).squaredNorm() - kDiskRadius * kDiskRadius;
}

}  // namespace

LevelSet tc1_levelset() {
    LevelSet ls;
    ls.value = [](const Eigen::Vector2d& p) {
        double prod = 1.0;
        for (const Bump& b : kBumps) {
            const double dx = p.x() - b.x0;
            const double dy = p.y() - b.y0;
            const double c = std::cos(b.theta);
            const double s = std::sin(b.theta);
            const double xr = c * dx - s * dy;
            const double yr = s * dx + c * dy;
            prod *= -1.0 + std::exp(-xr * xr / (2.0 * b.lx * b.lx) -
                                    yr * yr / (2.0 * b.ly * b.ly));
        }
        return -prod - 0.5;
    };
    return ls;
}

LevelSet disk_levelset(const Eigen::Vector2d& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("disk_levelset: radius must be > 0");
    LevelSet ls;
    ls.value = [center, radius](const Eigen::Vector2d& p) {
        return (p - center).squaredNorm() - radius * radius;
    };
    ls.gradient = [center](const Eigen::Vector2d& p) {
        return Eigen::Vector2d(2.0 * (p - center));
    };
    return ls;
}

LevelSet halfplane_levelset(const Eigen::Vector2d& normal, double offset) {
    LevelSet ls;
    ls.value = [normal, offset](const Eigen::Vector2d& p) {
        return normal.dot(p) - offset;
    };
    ls.gradient = [normal](const Eigen::Vector2d&) { return normal; };
    return ls;
}

LevelSet named_levelset(const std::string& name) {
    if (name == "tc1") return tc1_levelset();
    if (name == "disk") return disk_levelset(kDiskCenter, kDiskRadius);
    if (name == "halfplane") return halfplane_levelset(Eigen::Vector2d(1.0, 0.0), 0.5);
    throw std::invalid_argument("unknown level-set '" + name +
                                "'; known: disk, halfplane, tc1");
}

std::vector<std::string> case_names() {
    return {"disk-exp", "disk-poly", "patch-linear", "tc1"};
}

TestCase get_case(const std::string& name) {
    TestCase tc;
    tc.name = name;
    tc.bbox = BoundingBox{0.0, 0.0, 1.0, 1.0};

    if (name == "tc1") {
        tc.phi = tc1_levelset();
        tc.f = [](const Eigen::Vector2d& p) { return std::cos(p.x()) * std::exp(p.y()); };
        tc.gamma = 100.0;
        tc.sigma_d = 0.1;
        return tc;
    }
    if (name == "disk-poly") {
        tc.phi = disk_levelset(kDiskCenter, kDiskRadius);
        tc.f = [](const Eigen::Vector2d&) { return 4.0; };
        tc.exact.value = [](const Eigen::Vector2d& p) { return -disk_phi(p); };
        tc.exact.gradient = [](const Eigen::Vector2d& p) {
            return Eigen::Vector2d(-2.0 * (p - kDiskCenter));
        };
        tc.gamma = 100.0;
        tc.sigma_d = 0.1;
        return tc;
    }
    if (name == "disk-exp") {
        tc.phi = disk_levelset(kDiskCenter, kDiskRadius);
        // u = 1 - exp(phi^2) with phi = r^2 - R^2 vanishes on the circle;
        // f = -lap u = exp(phi^2) (8 r^2 + 16 r^2 phi^2 + 8 phi).
        tc.f = [](const Eigen::Vector2d& p) {
            const double r2 = (p - kDiskCenter).squaredNorm();
            const double phi = disk_phi(p);
            return std::exp(phi * phi) * (8.0 * r2 + 16.0 * r2 * phi * phi + 8.0 * phi);
        };
        tc.exact.value = [](const Eigen::Vector2d& p) {
            const double phi = disk_phi(p);
            return 1.0 - std::exp(phi * phi);
        };
        tc.exact.gradient = [](const Eigen::Vector2d& p) {
            const double phi = disk_phi(p);
            return Eigen::Vector2d(-4.0 * phi * std::exp(phi * phi) * (p - kDiskCenter));
        };
        tc.gamma = 100.0;
        tc.sigma_d = 0.01;
        return tc;
    }
    if (name == "patch-linear") {
        tc.phi = disk_levelset(kDiskCenter, kDiskRadius);
        tc.f = [](const Eigen::Vector2d&) { return 0.0; };
        tc.u_dirichlet = [](const Eigen::Vector2d& p) { return p.x() + p.y(); };
        tc.exact.value = [](const Eigen::Vector2d& p) { return p.x() + p.y(); };
        tc.exact.gradient = [](const Eigen::Vector2d&) { return Eigen::Vector2d(1.0, 1.0); };
        tc.gamma = 100.0;
        tc.sigma_d = 0.1;
        return tc;
    }

    std::ostringstream msg;
    msg << "unknown case '" << name << "'; known cases:";
    for (const std::string& cn : case_names()) msg << " " << cn;
    throw std::invalid_argument(msg.str());
}

}  // namespace phifem
