#include "dgxfem/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace dgxfem {

QuadRule1D gauss_segment(int m) {
    if (m < 1 || m > 20)
        throw UnsupportedOrder("gauss_segment: point count " + std::to_string(m) +
                               " outside [1,20]");
    QuadRule1D rule;
    rule.points.resize(m);
    rule.weights.resize(m);
    rule.exactness_degree = 2 * m - 1;

    // Newton iteration on the roots of the Legendre polynomial P_m,
    // starting from the Chebyshev estimate. Symmetric pairs share work.
    for (int k = 0; k < (m + 1) / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // three-term recurrence for P_m(x) and P_m'(x)
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= m; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.points[k] = -x;
        rule.weights[k] = w;
        rule.points[m - 1 - k] = x;
        rule.weights[m - 1 - k] = w;
    }
    if (m % 2 == 1) rule.points[m / 2] = 0.0;
    return rule;
}

QuadRule gauss_square(int m) {
    const QuadRule1D g = gauss_segment(m);
    QuadRule rule;
    rule.exactness_degree = g.exactness_degree;
    rule.points.reserve(static_cast<std::size_t>(m) * m);
    rule.weights.reserve(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            rule.points.push_back({g.points[i], g.points[j]});
            rule.weights.push_back(g.weights[i] * g.weights[j]);
        }
    return rule;
}

QuadRule gauss_triangle(int degree) {
    // Collapsed map (u,v) in [0,1]^2 -> (u, v(1-u)); the Jacobian (1-u)
    // raises the u-degree by one, hence m = ceil((degree+2)/2).
    const int m = std::max(1, (degree + 3) / 2);
    const QuadRule1D g = gauss_segment(std::min(m, 20));
    QuadRule rule;
    rule.exactness_degree = degree;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const double u = 0.5 * (g.points[i] + 1.0);
            const double v = 0.5 * (g.points[j] + 1.0);
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(0.25 * g.weights[i] * g.weights[j] * (1.0 - u));
        }
    return rule;
}

double polygon_area(const std::vector<Vec2>& v) {
    double a = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) a += v[i].cross(v[(i + 1) % n]);
    return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& v) {
    const std::size_t n = v.size();
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        const double c = p.cross(q);
        a += c;
        cx += (p.x + q.x) * c;
        cy += (p.y + q.y) * c;
    }
    a *= 0.5;
    if (std::abs(a) < 1e-300) throw DegeneratePolygon("polygon_centroid: zero area");
    return {cx / (6.0 * a), cy / (6.0 * a)};
}

QuadRule polygon_rule(const std::vector<Vec2>& vertices, int degree) {
    QuadRule rule;
    rule.exactness_degree = degree;
    const std::size_t n = vertices.size();
    if (n < 3) return rule;
    const Vec2 a = polygon_centroid(vertices);
    const QuadRule tri = gauss_triangle(degree);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = vertices[i] - a;
        const Vec2 e1 = vertices[(i + 1) % n] - a;
        const double jac = e0.cross(e1);  // 2x triangle area, signed
        if (std::abs(jac) < 1e-300) continue;
        for (std::size_t q = 0; q < tri.size(); ++q) {
            rule.points.push_back(a + tri.points[q].x * e0 + tri.points[q].y * e1);
            rule.weights.push_back(tri.weights[q] * jac);
        }
    }
    return rule;
}

double polygon_monomial_integral(const std::vector<Vec2>& v, int a, int b) {
    // int x^a y^b dA = oint x^{a+1}/(a+1) y^b dy; edges parametrized linearly
    // and the 1-d integrals done with an exact Gauss rule.
    const int deg = a + 1 + b;
    const QuadRule1D g = gauss_segment(deg / 2 + 1);
    double total = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& p = v[i];
        const Vec2& q = v[(i + 1) % n];
        const double dy = q.y - p.y;
        if (dy == 0.0) continue;
        for (std::size_t k = 0; k < g.points.size(); ++k) {
            const double t = 0.5 * (g.points[k] + 1.0);
            const double x = p.x + t * (q.x - p.x);
            const double y = p.y + t * (q.y - p.y);
            total += 0.5 * g.weights[k] * std::pow(x, a + 1) / (a + 1) * std::pow(y, b) * dy;
        }
    }
    return total;
}

}  // namespace dgxfem
