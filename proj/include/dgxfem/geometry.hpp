#pragma once

#include <array>
#include <optional>
#include <vector>

#include "dgxfem/common.hpp"

namespace dgxfem {

// Implicit interface Gamma = {phi = 0}. Omega1 = {phi < 0}, Omega2 = {phi > 0};
// the unit normal n1 = grad phi / |grad phi| points from Omega1 into Omega2.
struct LevelSetInterface {
    ScalarField phi;
    VectorField grad_phi;
    // upper bound on the curvature of Gamma, supplied by the concrete interface
    double curvature_bound = 0.0;

    Vec2 unit_normal(Vec2 p) const { return grad_phi(p).normalized(); }
};

LevelSetInterface make_circle_interface(Vec2 center, double radius);
// phi = (p - point) . normal, a straight interface through `point`.
LevelSetInterface make_line_interface(Vec2 point, Vec2 normal);
// phi identically equal to `value` (no interface; degenerates to one-phase FEM).
LevelSetInterface make_constant_levelset(double value);
// The circle of the reference experiment: center (0.5,0.5), r^2 = 1/8.
LevelSetInterface make_reference_circle();

// Uniform n x n partition of the closed unit square into axis-aligned cells.
struct CartesianMesh {
    int n = 1;
    double h = 1.0;

    explicit CartesianMesh(int n_cells) : n(n_cells), h(1.0 / n_cells) {}

    int num_cells() const { return n * n; }
    int cell_id(int ix, int iy) const { return iy * n + ix; }
    int cell_ix(int id) const { return id % n; }
    int cell_iy(int id) const { return id / n; }
    Vec2 cell_origin(int id) const { return {cell_ix(id) * h, cell_iy(id) * h}; }
    // element diameter; gamma0 = 2 for squares since h_K^2 = 2|K|
    double h_diam() const { return std::sqrt(2.0) * h; }
    double cell_measure() const { return h * h; }
    // corners counterclockwise from the lower-left one
    std::array<Vec2, 4> cell_corners(int id) const {
        const Vec2 o = cell_origin(id);
        return {Vec2{o.x, o.y}, Vec2{o.x + h, o.y}, Vec2{o.x + h, o.y + h}, Vec2{o.x, o.y + h}};
    }
};

enum class CellClass { Pure1, Pure2, Cut };

// Sign with the measure-zero tie broken toward Omega2: |phi| < 1e-13 counts
// as positive so that vertices sitting on Gamma classify deterministically.
inline int levelset_sign(double phi) { return phi <= -1e-13 ? -1 : 1; }

CellClass classify_cell(const CartesianMesh& mesh, const LevelSetInterface& ls, int cell_id);

// Root of phi on the segment [p0,p1]; requires a sign change between the
// endpoints. Bisection with Newton polish to |phi| < 1e-13.
std::optional<Vec2> edge_intersection(const LevelSetInterface& ls, Vec2 p0, Vec2 p1);

// Geometric description of one intersected cell, sufficient to build
// quadrature rules: the two straight boundary chains (counterclockwise,
// from one arc endpoint to the other) and the interface arc between them.
struct CutGeometry {
    const LevelSetInterface* ls = nullptr;
    std::array<Vec2, 2> intersections{};
    // chain_i is the straight part of the boundary of K_i; the region closes
    // with the interface arc running from chain_i.back() to chain_i.front().
    std::vector<Vec2> chain1, chain2;
    double cell_measure = 0.0;
};

// Smooth parametrization of the interface arc between two points on Gamma,
// written as a graph over the chord: c(s) = p0 + s (p1-p0) + xi(s) nu.
class ArcParam {
public:
    ArcParam(const LevelSetInterface& ls, Vec2 p0, Vec2 p1);

    Vec2 at(double s) const;
    // dc/ds by implicit differentiation of phi(c(s)) = 0
    Vec2 tangent(double s) const;
    double chord_length() const { return chord_.norm(); }

private:
    double offset(double s) const;

    const LevelSetInterface* ls_;
    Vec2 p0_;
    Vec2 chord_;
    Vec2 nu_;  // unit normal to the chord
    double bracket_;
};

}  // namespace dgxfem
