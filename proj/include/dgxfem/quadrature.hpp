#pragma once

#include <vector>

#include "dgxfem/common.hpp"

namespace dgxfem {

// A quadrature rule. Points are reference or physical coordinates depending
// on which factory produced the rule; weights are strictly positive.
struct QuadRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    // unit normals, only filled by interface rules
    std::vector<Vec2> normals;
    int exactness_degree = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    double weight_sum() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }
};

// 1-d Gauss-Legendre nodes/weights on [-1,1], exact for degree 2m-1.
// Throws UnsupportedOrder for m outside [1,20].
struct QuadRule1D {
    std::vector<double> points;
    std::vector<double> weights;
    int exactness_degree = 0;
};

QuadRule1D gauss_segment(int m);

// Tensor product of gauss_segment(m) on [-1,1]^2.
QuadRule gauss_square(int m);

// Rule on the unit reference triangle {x,y >= 0, x+y <= 1} built from a
// collapsed tensor rule; exact for total degree `degree`.
QuadRule gauss_triangle(int degree);

// Physical rule over an arbitrary (possibly nonconvex) simple polygon,
// fanned from an anchor point; exact for total degree `degree` in physical
// coordinates. The anchor must see every edge with consistent orientation.
QuadRule polygon_rule(const std::vector<Vec2>& vertices, int degree);

// Exact integral of x^a y^b over a simple polygon (Green's theorem).
// Test oracle material but used by the lab module as well.
double polygon_monomial_integral(const std::vector<Vec2>& vertices, int a, int b);

double polygon_area(const std::vector<Vec2>& vertices);
Vec2 polygon_centroid(const std::vector<Vec2>& vertices);

}  // namespace dgxfem
