#pragma once

#include <vector>

#include "dgxfem/geometry.hpp"
#include "dgxfem/quadrature.hpp"

namespace dgxfem {

// Geometric record of one element: classification, sub-element quadratures,
// and the interface segment rule. Pure cells carry a single full-cell rule
// on their side; cut cells carry rules for K1, K2 and e_K.
struct CutCell {
    int cell_id = -1;
    CellClass cls = CellClass::Pure2;
    std::array<Vec2, 2> edge_intersections{};
    double measure1 = 0.0;
    double measure2 = 0.0;
    double interface_arclength = 0.0;
    QuadRule quad1, quad2;  // physical rules over K1, K2
    QuadRule quad_e;        // physical rule over e_K, with unit normals n1
    std::vector<Vec2> chain1, chain2;  // straight boundary chains (ccw)

    bool is_cut() const { return cls == CellClass::Cut; }
    double measure(int side) const { return side == 1 ? measure1 : measure2; }
    const QuadRule& quad(int side) const { return side == 1 ? quad1 : quad2; }
    const std::vector<Vec2>& chain(int side) const { return side == 1 ? chain1 : chain2; }
};

// Composite rule over the curved sub-element K_i: straight triangles fanned
// from an interior anchor plus one transfinite-blended sector under the arc.
// Returns an empty rule when |K_i| < 1e-14 |K| (nothing to integrate).
QuadRule curved_subcell_rule(const CutGeometry& geo, int side, int target_degree);

// Arc-length weighted Gauss rule on e_K; every point carries n1 = grad phi/|grad phi|.
QuadRule interface_rule(const CutGeometry& geo, int target_degree);

CutCell build_cutcell(const CartesianMesh& mesh, const LevelSetInterface& ls, int cell_id,
                      int quad_degree);

// All cells of the mesh, indexed by cell id.
std::vector<CutCell> build_all_cutcells(const CartesianMesh& mesh, const LevelSetInterface& ls,
                                        int quad_degree);

}  // namespace dgxfem
