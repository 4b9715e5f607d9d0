#include <doctest.h>

#include <cmath>
#include <random>

#include "dgxfem/cutcell.hpp"
#include "dgxfem/quadrature.hpp"

using namespace dgxfem;

namespace {

double integrate(const QuadRule& rule, const ScalarField& f) {
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(rule.points[q]);
    return s;
}

// area of a rectangle-circle intersection by exact column slicing: the
// integrand y-extent is piecewise smooth with analytically known breakpoints
double circle_rect_area(Vec2 c, double r, double x0, double x1, double y0, double y1) {
    std::vector<double> breaks = {x0, x1};
    auto push = [&](double x) {
        if (x > x0 + 1e-15 && x < x1 - 1e-15) breaks.push_back(x);
    };
    push(c.x - r);
    push(c.x + r);
    for (double yb : {y0, y1}) {
        const double d2 = r * r - (yb - c.y) * (yb - c.y);
        if (d2 > 0.0) {
            push(c.x - std::sqrt(d2));
            push(c.x + std::sqrt(d2));
        }
    }
    std::sort(breaks.begin(), breaks.end());
    const QuadRule1D g = gauss_segment(20);
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double a = breaks[k], b = breaks[k + 1];
        for (std::size_t q = 0; q < g.points.size(); ++q) {
            const double x = 0.5 * (a + b) + 0.5 * (b - a) * g.points[q];
            const double d2 = r * r - (x - c.x) * (x - c.x);
            double len = 0.0;
            if (d2 > 0.0) {
                const double g1 = c.y - std::sqrt(d2), g2 = c.y + std::sqrt(d2);
                len = std::max(0.0, std::min(y1, g2) - std::max(y0, g1));
            }
            area += 0.5 * (b - a) * g.weights[q] * len;
        }
    }
    return area;
}

// 2048x2048 midpoint rule with a sign test; accuracy only O(arc * subcell)
double signtest_area(const LevelSetInterface& ls, double x0, double x1, double y0, double y1) {
    const int m = 2048;
    const double dx = (x1 - x0) / m, dy = (y1 - y0) / m;
    long count = 0;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            if (ls.phi({x0 + (i + 0.5) * dx, y0 + (j + 0.5) * dy}) < 0.0) ++count;
    return count * dx * dy;
}

}  // namespace

TEST_CASE("gauss_segment basics") {
    const QuadRule1D r1 = gauss_segment(1);
    CHECK(r1.points[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const QuadRule1D r2 = gauss_segment(2);
    CHECK(r2.points[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

    const QuadRule1D r3 = gauss_segment(3);
    double x4 = 0.0;
    for (std::size_t q = 0; q < r3.points.size(); ++q)
        x4 += r3.weights[q] * std::pow(r3.points[q], 4);
    CHECK(x4 == doctest::Approx(0.4).epsilon(1e-14));

    CHECK_THROWS_AS(gauss_segment(21), UnsupportedOrder);
    CHECK_THROWS_AS(gauss_segment(0), UnsupportedOrder);
}

TEST_CASE("gauss rules integrate monomials to their exactness degree") {
    for (int m = 1; m <= 20; ++m) {
        const QuadRule1D r = gauss_segment(m);
        double wsum = 0.0;
        for (double w : r.weights) wsum += w;
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int k = 0; k <= r.exactness_degree; ++k) {
            double val = 0.0;
            for (std::size_t q = 0; q < r.points.size(); ++q)
                val += r.weights[q] * std::pow(r.points[q], k);
            const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            CHECK(std::abs(val - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("gauss_square") {
    const QuadRule r1 = gauss_square(1);
    CHECK(r1.size() == 1);
    CHECK(r1.points[0].x == doctest::Approx(0.0));
    CHECK(r1.weights[0] == doctest::Approx(4.0));

    const QuadRule r2 = gauss_square(2);
    CHECK(integrate(r2, [](Vec2 p) { return p.x * p.x * p.y * p.y; }) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(r2.weight_sum() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("reference triangle rule") {
    const QuadRule tri = gauss_triangle(4);
    CHECK(tri.weight_sum() == doctest::Approx(0.5).epsilon(1e-14));
    // int x^2 y^2 over the unit triangle = 2! 2! / 6! = 1/180
    CHECK(integrate(tri, [](Vec2 p) { return p.x * p.x * p.y * p.y; }) ==
          doctest::Approx(1.0 / 180.0).epsilon(1e-13));
}

TEST_CASE("polygon monomial oracle agrees with polygon_rule") {
    const std::vector<Vec2> poly = {{0.1, 0.0}, {0.9, 0.2}, {1.0, 0.8}, {0.4, 1.0}, {0.0, 0.5}};
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            const double exact = polygon_monomial_integral(poly, a, b);
            const QuadRule rule = polygon_rule(poly, a + b);
            const double approx =
                integrate(rule, [a, b](Vec2 p) { return std::pow(p.x, a) * std::pow(p.y, b); });
            CHECK(approx == doctest::Approx(exact).epsilon(1e-12));
        }
}

TEST_CASE("curved subcell rule: straight cuts are exact for polynomials") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.15, 0.85);
    const CartesianMesh mesh(1);
    for (int trial = 0; trial < 12; ++trial) {
        const double t = uni(rng);
        const double angle = uni(rng) * M_PI;
        const Vec2 normal{std::cos(angle), std::sin(angle)};
        const LevelSetInterface ls = make_line_interface({t, t}, normal);
        CutCell cell = build_cutcell(mesh, ls, 0, 8);
        if (!cell.is_cut()) continue;

        for (int side = 1; side <= 2; ++side) {
            const auto& chain = cell.chain(side);
            // straight cut: the sub-element is exactly the chord-closed polygon
            for (int a = 0; a <= 3; ++a)
                for (int b = 0; a + b <= 3; ++b) {
                    const double exact = polygon_monomial_integral(chain, a, b);
                    const double approx = integrate(cell.quad(side), [a, b](Vec2 p) {
                        return std::pow(p.x, a) * std::pow(p.y, b);
                    });
                    CHECK(std::abs(approx - exact) < 1e-12 * std::max(1.0, std::abs(exact)));
                }
        }
    }
}

TEST_CASE("curved subcell rule: straight vertical cut closed form") {
    // phi = x - 0.5 on the unit cell: K1 = [0,0.5]x[0,1]
    const CartesianMesh mesh(1);
    const LevelSetInterface ls = make_line_interface({0.5, 0.0}, {1.0, 0.0});
    const CutCell cell = build_cutcell(mesh, ls, 0, 6);
    REQUIRE(cell.is_cut());
    // int (x+y) over [0,0.5]x[0,1] = 0.5^2/2 + 0.5*0.5 = 0.375
    CHECK(integrate(cell.quad1, [](Vec2 p) { return p.x + p.y; }) ==
          doctest::Approx(0.375).epsilon(1e-13));
    CHECK(cell.measure1 == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("curved subcell rule vs independent area oracles (reference circle)") {
    // cell [0.125,0.1875]x[0.4375,0.5] of the n=16 mesh
    const CartesianMesh mesh(16);
    const LevelSetInterface ls = make_reference_circle();
    const int id = mesh.cell_id(2, 7);
    REQUIRE(classify_cell(mesh, ls, id) == CellClass::Cut);
    const CutCell cell = build_cutcell(mesh, ls, id, 6);

    const double exact =
        circle_rect_area({0.5, 0.5}, std::sqrt(0.125), 0.125, 0.1875, 0.4375, 0.5);
    CHECK(cell.measure1 == doctest::Approx(exact).epsilon(1e-9));

    // the sign-test oracle is only accurate to O(arc length * subcell size)
    const double coarse = signtest_area(ls, 0.125, 0.1875, 0.4375, 0.5);
    CHECK(std::abs(cell.measure1 - coarse) < 5e-6);
}

TEST_CASE("pure cell gets the full tensor rule") {
    const CartesianMesh mesh(16);
    const LevelSetInterface ls = make_reference_circle();
    const int id = mesh.cell_id(8, 8);  // [0.5,0.5625]^2, inside the circle
    const CutCell cell = build_cutcell(mesh, ls, id, 4);
    CHECK(cell.cls == CellClass::Pure1);
    CHECK(cell.measure1 == doctest::Approx(mesh.cell_measure()).epsilon(1e-14));
    CHECK(cell.measure2 == 0.0);
    CHECK(cell.quad_e.empty());
}

TEST_CASE("interface rule lengths") {
    // straight cut: sum of weights equals the cell side
    const CartesianMesh mesh(4);
    const LevelSetInterface line = make_line_interface({0.53, 0.0}, {1.0, 0.0});
    const CutCell cell = build_cutcell(mesh, line, mesh.cell_id(2, 1), 4);
    REQUIRE(cell.is_cut());
    CHECK(cell.interface_arclength == doctest::Approx(mesh.h).epsilon(1e-14));

    // circle: each cut cell's arc length equals r * dtheta of its endpoints
    const LevelSetInterface circ = make_reference_circle();
    const CartesianMesh m16(16);
    const double r = std::sqrt(0.125);
    int checked = 0;
    for (int id = 0; id < m16.num_cells() && checked < 8; ++id) {
        if (classify_cell(m16, circ, id) != CellClass::Cut) continue;
        const CutCell c = build_cutcell(m16, circ, id, 4);
        if (!c.is_cut()) continue;
        auto angle = [&](Vec2 p) { return std::atan2(p.y - 0.5, p.x - 0.5); };
        double dtheta =
            std::abs(angle(c.edge_intersections[0]) - angle(c.edge_intersections[1]));
        dtheta = std::min(dtheta, 2.0 * M_PI - dtheta);
        CHECK(c.interface_arclength == doctest::Approx(r * dtheta).epsilon(1e-10));
        ++checked;
    }
    CHECK(checked == 8);
}

TEST_CASE("positivity of all emitted weights") {
    const CartesianMesh mesh(8);
    const LevelSetInterface ls = make_reference_circle();
    const auto cells = build_all_cutcells(mesh, ls, 6);
    for (const CutCell& c : cells) {
        for (double w : c.quad1.weights) CHECK(w > 0.0);
        for (double w : c.quad2.weights) CHECK(w > 0.0);
        for (double w : c.quad_e.weights) CHECK(w > 0.0);
    }
}

TEST_CASE("rule saturation: doubling the degree changes smooth integrals below 1e-10") {
    const CartesianMesh mesh(8);
    const LevelSetInterface ls = make_reference_circle();
    const auto f = [](Vec2 p) { return std::exp(p.x * p.y); };
    for (int id : {mesh.cell_id(1, 3), mesh.cell_id(2, 6), mesh.cell_id(5, 1)}) {
        REQUIRE(classify_cell(mesh, ls, id) == CellClass::Cut);
        const CutCell lo = build_cutcell(mesh, ls, id, 6);
        const CutCell hi = build_cutcell(mesh, ls, id, 12);
        CHECK(std::abs(integrate(lo.quad1, f) - integrate(hi.quad1, f)) < 1e-10);
        CHECK(std::abs(integrate(lo.quad2, f) - integrate(hi.quad2, f)) < 1e-10);
    }
}
