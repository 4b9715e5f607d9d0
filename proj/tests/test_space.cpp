#include <doctest.h>

#include <cmath>
#include <random>

#include "dgxfem/analysis.hpp"
#include "dgxfem/space.hpp"

using namespace dgxfem;

TEST_CASE("basis: Kronecker nodes and partition of unity") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int p = 1; p <= 4; ++p) {
        const Basis basis(p);
        std::vector<double> vals;
        for (int k = 0; k < basis.size(); ++k) {
            basis.eval(basis.nodes()[k], vals);
            for (int j = 0; j < basis.size(); ++j)
                CHECK(vals[j] == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
        }
        for (int trial = 0; trial < 10; ++trial) {
            basis.eval({uni(rng), uni(rng)}, vals);
            double sum = 0.0;
            for (double v : vals) sum += v;
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("compute_kappa branches") {
    CutCell cell;
    cell.cls = CellClass::Cut;
    auto with_frac = [&](double f) {
        cell.measure1 = f;
        cell.measure2 = 1.0 - f;
    };

    with_frac(0.5);
    auto k = compute_kappa(cell, 0.125, 1.0);
    CHECK(k.first == doctest::Approx(0.5));
    CHECK(k.second == doctest::Approx(0.5));

    with_frac(0.01);
    k = compute_kappa(cell, 0.125, 1.0);
    CHECK(k.first == 0.0);
    CHECK(k.second == 1.0);

    // 0.95 is not above 1 - 0.02 = 0.98, so the middle branch applies
    with_frac(0.95);
    k = compute_kappa(cell, 0.02, 1.0);
    CHECK(k.first == doctest::Approx(0.95));
    CHECK(k.second == doctest::Approx(0.05));

    CHECK_THROWS_AS(compute_kappa(cell, 0.5, 1.0), InvalidThreshold);
}

TEST_CASE("kappa sweep is monotone with saturated branches") {
    const CartesianMesh mesh(1);
    const double threshold = 0.1;  // c0 * h_K
    double prev = -1.0;
    for (double t = 0.01; t < 1.0; t += 0.015) {
        const LevelSetInterface ls = make_line_interface({t, 0.0}, {1.0, 0.0});
        const CutCell cell = build_cutcell(mesh, ls, 0, 4);
        REQUIRE(cell.is_cut());
        const auto k = compute_kappa(cell, threshold / mesh.h_diam(), mesh.h_diam());
        CHECK(k.first + k.second == 1.0);
        CHECK(k.first >= prev - 1e-12);
        prev = k.first;
        if (t < threshold - 0.02) CHECK(k.first == 0.0);
        if (t > 1.0 - threshold + 0.02) CHECK(k.first == 1.0);
    }
}

TEST_CASE("xfe space without an interface degenerates to standard FEM") {
    const CartesianMesh mesh(4);
    const LevelSetInterface ls = make_constant_levelset(1.0);
    const auto cuts = build_all_cutcells(mesh, ls, 4);
    const XfeSpace space(mesh, cuts, 1);
    CHECK(space.ndof() == 25);
    CHECK(space.active_count(1) == 0);
    CHECK(space.active_count(2) == 25);
}

TEST_CASE("xfe space doubling on the reference circle, n=16, p=1") {
    const CartesianMesh mesh(16);
    const LevelSetInterface ls = make_reference_circle();
    const auto cuts = build_all_cutcells(mesh, ls, 4);
    const XfeSpace space(mesh, cuts, 1);

    // independent enumeration of side-1 active nodes
    const double tol = 1e-14 * mesh.cell_measure();
    std::vector<bool> act1(space.num_nodes(), false);
    int n1 = 0;
    for (int id = 0; id < mesh.num_cells(); ++id) {
        if (cuts[id].measure1 <= tol) continue;
        for (int loc = 0; loc < 4; ++loc) {
            const int node = space.cell_node(id, loc);
            if (!act1[node]) {
                act1[node] = true;
                ++n1;
            }
        }
    }
    CHECK(space.active_count(1) == n1);
    CHECK(space.ndof() == 289 + n1);

    // every active dof appears in at least one cell scatter list
    std::vector<bool> seen(space.ndof(), false);
    std::vector<int> dofs;
    for (int id = 0; id < mesh.num_cells(); ++id)
        for (int side = 1; side <= 2; ++side) {
            if (cuts[id].measure(side) <= tol) continue;
            space.cell_dofs(id, side, dofs);
            for (int d : dofs)
                if (d >= 0) seen[d] = true;
        }
    for (int d = 0; d < space.ndof(); ++d) CHECK(seen[d]);
}

TEST_CASE("interpolation: constants, jump reproduction, projection") {
    const CartesianMesh mesh(8);
    const LevelSetInterface ls = make_reference_circle();
    const auto cuts = build_all_cutcells(mesh, ls, 6);
    const XfeSpace space(mesh, cuts, 2);

    SUBCASE("constants interpolate exactly with zero jump") {
        const auto ones = interpolate([](Vec2) { return 1.0; }, [](Vec2) { return 1.0; }, space);
        for (double c : ones) CHECK(c == 1.0);
        CHECK(jump_seminorm(ones, space, cuts, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("piecewise polynomial with a jump is reproduced pointwise") {
        const auto w1 = [](Vec2 p) { return 1.0 + p.x + p.y * p.y; };
        const auto w2 = [](Vec2 p) { return -2.0 + p.x * p.y; };
        const auto coeff = interpolate(w1, w2, space);
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        int hits1 = 0, hits2 = 0;
        while (hits1 < 25 || hits2 < 25) {
            const Vec2 x{uni(rng), uni(rng)};
            const int id = mesh.cell_id(std::min(int(x.x * mesh.n), mesh.n - 1),
                                        std::min(int(x.y * mesh.n), mesh.n - 1));
            const int side = ls.phi(x) < 0.0 ? 1 : 2;
            if (cuts[id].measure(side) <= 0.0) continue;
            const double expected = side == 1 ? w1(x) : w2(x);
            CHECK(eval_uh(space, coeff, id, side, x) ==
                  doctest::Approx(expected).epsilon(1e-12));
            (side == 1 ? hits1 : hits2)++;
        }
    }

    SUBCASE("interpolation is a projection on the discrete space") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        std::vector<double> coeff(space.ndof());
        for (double& c : coeff) c = uni(rng);
        // evaluate the discrete function side-wise through its own nodes
        auto v1 = [&](Vec2 x) {
            const int node_x = std::min(int(std::round(x.x * (space.nodes_per_side_1d() - 1))),
                                        space.nodes_per_side_1d() - 1);
            const int node_y = std::min(int(std::round(x.y * (space.nodes_per_side_1d() - 1))),
                                        space.nodes_per_side_1d() - 1);
            const int d = space.dof(node_y * space.nodes_per_side_1d() + node_x, 1);
            return d >= 0 ? coeff[d] : 0.0;
        };
        auto v2 = [&](Vec2 x) {
            const int node_x = std::min(int(std::round(x.x * (space.nodes_per_side_1d() - 1))),
                                        space.nodes_per_side_1d() - 1);
            const int node_y = std::min(int(std::round(x.y * (space.nodes_per_side_1d() - 1))),
                                        space.nodes_per_side_1d() - 1);
            const int d = space.dof(node_y * space.nodes_per_side_1d() + node_x, 2);
            return d >= 0 ? coeff[d] : 0.0;
        };
        const auto again = interpolate(v1, v2, space);
        for (int d = 0; d < space.ndof(); ++d) CHECK(again[d] == coeff[d]);
    }
}

TEST_CASE("interpolant of the reference solution converges at order p+1") {
    const LevelSetInterface ls = make_reference_circle();
    for (int p : {1, 2}) {
        std::vector<double> errs;
        for (int n : {8, 16, 32}) {
            const CartesianMesh mesh(n);
            const auto cuts = build_all_cutcells(mesh, ls, 2 * p + 2);
            const XfeSpace space(mesh, cuts, p);
            const ProblemData prob = make_reference_problem(10.0, 1.0);
            const auto coeff = interpolate(prob.u1, prob.u2, space);
            errs.push_back(l2_error(coeff, prob, space, cuts));
        }
        const auto r = rates(errs);
        for (double rate : r) CHECK(rate >= p + 1 - 0.2);
    }
}
