#include "dgxfem/space.hpp"

#include <cmath>

namespace dgxfem {

Basis::Basis(int degree) : p_(degree) {
    nodes_1d_.resize(p_ + 1);
    for (int k = 0; k <= p_; ++k) nodes_1d_[k] = static_cast<double>(k) / p_;
    nodes_.resize(size());
    for (int b = 0; b <= p_; ++b)
        for (int a = 0; a <= p_; ++a) nodes_[b * (p_ + 1) + a] = {nodes_1d_[a], nodes_1d_[b]};
}

void Basis::lagrange_1d(double x, std::vector<double>& val, std::vector<double>& der) const {
    const int m = p_ + 1;
    val.assign(m, 1.0);
    der.assign(m, 0.0);
    for (int k = 0; k < m; ++k) {
        for (int j = 0; j < m; ++j) {
            if (j == k) continue;
            const double d = nodes_1d_[k] - nodes_1d_[j];
            der[k] = (der[k] * (x - nodes_1d_[j]) + val[k]) / d;
            val[k] *= (x - nodes_1d_[j]) / d;
        }
    }
}

void Basis::eval(Vec2 ref, std::vector<double>& values) const {
    std::vector<double> lx, dx, ly, dy;
    lagrange_1d(ref.x, lx, dx);
    lagrange_1d(ref.y, ly, dy);
    values.resize(size());
    for (int b = 0; b <= p_; ++b)
        for (int a = 0; a <= p_; ++a) values[b * (p_ + 1) + a] = lx[a] * ly[b];
}

void Basis::eval_grad(Vec2 ref, std::vector<Vec2>& grads) const {
    std::vector<double> lx, dx, ly, dy;
    lagrange_1d(ref.x, lx, dx);
    lagrange_1d(ref.y, ly, dy);
    grads.resize(size());
    for (int b = 0; b <= p_; ++b)
        for (int a = 0; a <= p_; ++a)
            grads[b * (p_ + 1) + a] = {dx[a] * ly[b], lx[a] * dy[b]};
}

std::pair<double, double> compute_kappa(const CutCell& cell, double c0, double h_K) {
    const double threshold = c0 * h_K;
    if (threshold >= 0.5)
        throw InvalidThreshold("compute_kappa: c0*h_K = " + std::to_string(threshold) +
                               " >= 1/2, branches overlap");
    const double total = cell.measure1 + cell.measure2;
    const double frac1 = cell.measure1 / total;
    if (frac1 < threshold) return {0.0, 1.0};
    if (frac1 > 1.0 - threshold) return {1.0, 0.0};
    return {frac1, 1.0 - frac1};
}

XfeSpace::XfeSpace(const CartesianMesh& mesh, const std::vector<CutCell>& cuts, int degree)
    : mesh_(&mesh), basis_(degree), p_(degree), n1d_(mesh.n * degree + 1) {
    const int nn = num_nodes();
    std::vector<bool> act1(nn, false), act2(nn, false);
    const double tol = 1e-14 * mesh.cell_measure();
    for (int id = 0; id < mesh.num_cells(); ++id) {
        const bool has1 = cuts[id].measure1 > tol;
        const bool has2 = cuts[id].measure2 > tol;
        for (int loc = 0; loc < basis_.size(); ++loc) {
            const int node = cell_node(id, loc);
            if (has1) act1[node] = true;
            if (has2) act2[node] = true;
        }
    }
    dof_.assign(nn * 2, -1);
    int next = 0;
    for (int node = 0; node < nn; ++node)
        if (act1[node]) dof_[node * 2] = next++;
    active1_ = next;
    for (int node = 0; node < nn; ++node)
        if (act2[node]) dof_[node * 2 + 1] = next++;
    active2_ = next - active1_;
    ndof_ = next;
}

int XfeSpace::cell_node(int cell_id, int loc) const {
    const int cx = mesh_->cell_ix(cell_id), cy = mesh_->cell_iy(cell_id);
    const int a = loc % (p_ + 1), b = loc / (p_ + 1);
    return (cy * p_ + b) * n1d_ + (cx * p_ + a);
}

void XfeSpace::cell_dofs(int cell_id, int side, std::vector<int>& out) const {
    out.resize(basis_.size());
    for (int loc = 0; loc < basis_.size(); ++loc) out[loc] = dof(cell_node(cell_id, loc), side);
}

Vec2 XfeSpace::to_ref(int cell_id, Vec2 x) const {
    const Vec2 o = mesh_->cell_origin(cell_id);
    return {(x.x - o.x) / mesh_->h, (x.y - o.y) / mesh_->h};
}

std::vector<int> XfeSpace::boundary_dofs() const {
    std::vector<int> out;
    for (int node = 0; node < num_nodes(); ++node) {
        if (!node_on_boundary(node)) continue;
        for (int side = 1; side <= 2; ++side)
            if (dof(node, side) >= 0) out.push_back(dof(node, side));
    }
    return out;
}

std::vector<double> interpolate(const ScalarField& w1, const ScalarField& w2,
                                const XfeSpace& space) {
    std::vector<double> coeff(space.ndof(), 0.0);
    for (int node = 0; node < space.num_nodes(); ++node) {
        const Vec2 x = space.node_coord(node);
        const int d1 = space.dof(node, 1);
        const int d2 = space.dof(node, 2);
        if (d1 >= 0) coeff[d1] = w1(x);
        if (d2 >= 0) coeff[d2] = w2(x);
    }
    return coeff;
}

}  // namespace dgxfem
