#pragma once

#include <utility>
#include <vector>

#include "dgxfem/cutcell.hpp"

namespace dgxfem {

// Tensor-product Lagrange basis of degree p on the reference square [0,1]^2,
// with equispaced nodes. Local node (a,b) has index b*(p+1)+a.
class Basis {
public:
    explicit Basis(int degree);

    int degree() const { return p_; }
    int size() const { return (p_ + 1) * (p_ + 1); }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    // values of all basis functions at a reference point
    void eval(Vec2 ref, std::vector<double>& values) const;
    // reference gradients of all basis functions
    void eval_grad(Vec2 ref, std::vector<Vec2>& grads) const;

private:
    void lagrange_1d(double x, std::vector<double>& val, std::vector<double>& der) const;

    int p_;
    std::vector<double> nodes_1d_;
    std::vector<Vec2> nodes_;
};

// Element-wise convex weights (kappa1, kappa2) of the interface average.
// Sliver sub-elements below the c0*h_K threshold are switched off entirely.
std::pair<double, double> compute_kappa(const CutCell& cell, double c0, double h_K);

// The doubled (Hansbo-Hansbo) space: each continuous Q_p node may carry one
// DOF per side of the interface; a (node, side) pair is active iff some
// element containing the node has positive measure on that side.
class XfeSpace {
public:
    XfeSpace(const CartesianMesh& mesh, const std::vector<CutCell>& cuts, int degree);

    int degree() const { return p_; }
    int ndof() const { return ndof_; }
    const CartesianMesh& mesh() const { return *mesh_; }
    const Basis& basis() const { return basis_; }

    int nodes_per_side_1d() const { return n1d_; }
    int num_nodes() const { return n1d_ * n1d_; }
    Vec2 node_coord(int node) const {
        const double d = 1.0 / (n1d_ - 1);
        return {(node % n1d_) * d, (node / n1d_) * d};
    }
    bool node_on_boundary(int node) const {
        const int ix = node % n1d_, iy = node / n1d_;
        return ix == 0 || iy == 0 || ix == n1d_ - 1 || iy == n1d_ - 1;
    }

    // global dof of (node, side), -1 if inactive
    int dof(int node, int side) const { return dof_[node * 2 + (side - 1)]; }
    int active_count(int side) const { return side == 1 ? active1_ : active2_; }

    // global node index of local node `loc` in cell `cell_id`
    int cell_node(int cell_id, int loc) const;
    // all (p+1)^2 global dofs of one side of a cell, -1 entries for inactive
    void cell_dofs(int cell_id, int side, std::vector<int>& out) const;

    // reference coordinates of a physical point inside a cell
    Vec2 to_ref(int cell_id, Vec2 x) const;

    std::vector<int> boundary_dofs() const;

private:
    const CartesianMesh* mesh_;
    Basis basis_;
    int p_;
    int n1d_;
    int ndof_ = 0;
    int active1_ = 0, active2_ = 0;
    std::vector<int> dof_;
};

// Nodal interpolant of the pair (w1, w2); each side-i DOF at node x receives
// w_i(x). The w_i must be evaluable on the whole domain (smooth extensions).
std::vector<double> interpolate(const ScalarField& w1, const ScalarField& w2,
                                const XfeSpace& space);

}  // namespace dgxfem
