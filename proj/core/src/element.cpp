#include "phifem/element.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phifem {

namespace {

// Reference gradients of the barycentric coordinates on the unit triangle
// with vertices (0,0), (1,0), (0,1).
const std::array<Eigen::Vector2d, 3> kLambdaGrad = {
    Eigen::Vector2d(-1.0, -1.0),
    Eigen::Vector2d(1.0, 0.0),
    Eigen::Vector2d(0.0, 1.0),
};

}  // namespace

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
    if (degree != 1 && degree != 2) {
        throw std::invalid_argument("ReferenceElement: unsupported degree " + std::to_string(degree));
    }
}

Eigen::Vector3d ReferenceElement::node(int i) const {
    if (i < 0 || i >= num_nodes()) {
        throw std::invalid_argument("ReferenceElement::node: index out of range");
    }
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    if (i < 3) {
        b[i] = 1.0;
    } else {
        b[(i - 3 + 1) % 3] = 0.5;
        b[(i - 3 + 2) % 3] = 0.5;
    }
    return b;
}

BasisEval ReferenceElement::eval(const Eigen::Vector3d& bary) const {
    BasisEval out;
    out.n = num_nodes();
    if (degree_ == 1) {
        for (int i = 0; i < 3; ++i) {
            out.value[static_cast<size_t>(i)] = bary[i];
            out.grad[static_cast<size_t>(i)] = kLambdaGrad[static_cast<size_t>(i)];
            out.hessian[static_cast<size_t>(i)].setZero();
        }
        return out;
    }
    // P2: vertex functions l_i (2 l_i - 1), edge functions 4 l_a l_b.
    for (int i = 0; i < 3; ++i) {
        const double l = bary[i];
        const Eigen::Vector2d g = kLambdaGrad[static_cast<size_t>(i)];
        out.value[static_cast<size_t>(i)] = l * (2.0 * l - 1.0);
        out.grad[static_cast<size_t>(i)] = (4.0 * l - 1.0) * g;
        out.hessian[static_cast<size_t>(i)] = 4.0 * (g * g.transpose());
    }
    for (int e = 0; e < 3; ++e) {
        const int a = (e + 1) % 3;
        const int b = (e + 2) % 3;
        const Eigen::Vector2d ga = kLambdaGrad[static_cast<size_t>(a)];
        const Eigen::Vector2d gb = kLambdaGrad[static_cast<size_t>(b)];
        out.value[static_cast<size_t>(3 + e)] = 4.0 * bary[a] * bary[b];
        out.grad[static_cast<size_t>(3 + e)] = 4.0 * (bary[a] * gb + bary[b] * ga);
        out.hessian[static_cast<size_t>(3 + e)] =
            4.0 * (ga * gb.transpose() + gb * ga.transpose());
    }
    return out;
}

namespace {

// Gauss-Legendre nodes/weights on [0,1], n points (exact to degree 2n-1).
// Newton iteration on the Legendre polynomial over [-1,1], then mapped.
void gauss_legendre_unit(int n, std::vector<double>& pts, std::vector<double>& wts) {
    pts.resize(static_cast<size_t>(n));
    wts.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        pts[static_cast<size_t>(i)] = 0.5 * (x + 1.0);
        wts[static_cast<size_t>(i)] = 0.5 * w;
    }
}

void push_sym3(QuadratureRule& r, double a, double w) {
    // orbit of (1-2a, a, a)
    const double c = 1.0 - 2.0 * a;
    r.points.emplace_back(c, a, a);
    r.points.emplace_back(a, c, a);
    r.points.emplace_back(a, a, c);
    r.weights.insert(r.weights.end(), 3, w);
}

// Symmetric rules, weights stored w.r.t. the reference measure (sum 1/2).
QuadratureRule symmetric_triangle_rule(int degree) {
    QuadratureRule r;
    r.exactness = degree;
    switch (degree) {
        case 1:
            r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
            r.weights.push_back(0.5);
            break;
        case 2:
            push_sym3(r, 1.0 / 6.0, 1.0 / 6.0);
            break;
        case 4:
            push_sym3(r, 0.445948490915965, 0.5 * 0.223381589678011);
            push_sym3(r, 0.091576213509771, 0.5 * 0.109951743655322);
            break;
        case 5:
            r.points.emplace_back(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
            r.weights.push_back(0.5 * 0.225);
            push_sym3(r, 0.470142064105115, 0.5 * 0.132394152788506);
            push_sym3(r, 0.101286507323456, 0.5 * 0.125939180544827);
            break;
        default:
            throw std::logic_error("symmetric_triangle_rule: no table for degree " +
                                   std::to_string(degree));
    }
    return r;
}

// Collapsed tensor-product rule: map (s,t) in [0,1]^2 to (x,y) = (s(1-t), t)
// with Jacobian (1-t). Exact for total degree d with ceil((d+1)/2) x
// ceil((d+2)/2) Gauss points; all weights positive.
QuadratureRule collapsed_triangle_rule(int degree) {
    const int ns = (degree + 2) / 2;
    const int nt = (degree + 3) / 2;
    std::vector<double> ps, ws, pt, wt;
    gauss_legendre_unit(ns, ps, ws);
    gauss_legendre_unit(nt, pt, wt);

    QuadratureRule r;
    r.exactness = degree;
    for (int a = 0; a < ns; ++a) {
        for (int b = 0; b < nt; ++b) {
            const double t = pt[static_cast<size_t>(b)];
            const double x = ps[static_cast<size_t>(a)] * (1.0 - t);
            const double y = t;
            r.points.emplace_back(1.0 - x - y, x, y);
            r.weights.push_back(ws[static_cast<size_t>(a)] * wt[static_cast<size_t>(b)] * (1.0 - t));
        }
    }
    return r;
}

}  // namespace

QuadratureRule triangle_quadrature(int exactness) {
    if (exactness < 0 || exactness > 10) {
        throw std::invalid_argument("triangle_quadrature: unsupported exactness " +
                                    std::to_string(exactness));
    }
    if (exactness <= 1) return symmetric_triangle_rule(1);
    if (exactness == 2) return symmetric_triangle_rule(2);
    if (exactness <= 4) return symmetric_triangle_rule(4);
    if (exactness == 5) return symmetric_triangle_rule(5);
    return collapsed_triangle_rule(exactness);
}

QuadratureRule segment_quadrature(int exactness) {
    if (exactness < 0 || exactness > 12) {
        throw std::invalid_argument("segment_quadrature: unsupported exactness " +
                                    std::to_string(exactness));
    }
    const int n = exactness / 2 + 1;
    std::vector<double> pts, wts;
    gauss_legendre_unit(n, pts, wts);
    QuadratureRule r;
    r.exactness = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        const double t = pts[static_cast<size_t>(i)];
        r.points.emplace_back(1.0 - t, t, 0.0);
        r.weights.push_back(wts[static_cast<size_t>(i)]);
    }
    return r;
}

}  // namespace phifem
