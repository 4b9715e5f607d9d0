#pragma once

#include <utility>
#include <vector>

#include "dgxfem/linalg.hpp"
#include "dgxfem/space.hpp"

namespace dgxfem {

// Data of the interface problem -div(alpha grad u) = f with
// [alpha grad u] = g_N and [u] = g_D = j n1 on Gamma, u = g on the outer
// boundary. Source and exact solution are stored per side so that
// manufactured solutions with a jump stay evaluable on the whole domain.
struct ProblemData {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
    ScalarField f1, f2;
    ScalarField g_neumann;         // scalar flux-jump datum on Gamma
    ScalarField g_dirichlet_jump;  // scalar j; the vector datum is j * n1

    // optional exact solution (used for error reports and boundary values)
    bool has_exact = false;
    ScalarField u1, u2;
    VectorField grad_u1, grad_u2;

    double alpha(int side) const { return side == 1 ? alpha1 : alpha2; }
};

// f, gN, j identically zero; handy base for tests.
ProblemData make_zero_problem(double alpha1, double alpha2);
// The reference manufactured problem: circle r^2 = 1/8 centered at (1/2,1/2),
// u = exp(x y)/alpha1 inside, sin(pi x) sin(pi y)/alpha2 outside.
ProblemData make_reference_problem(double alpha1, double alpha2);

enum class Scheme { IP, Lifting };

struct SchemeParams {
    Scheme scheme = Scheme::IP;
    double beta = 1.0;       // +1 SIPG, -1 NIPG
    double eta_beta = 20.0;  // IP penalty scale
    double eta1 = 1.0;       // Lifting jump penalty
    double eta = 2.0;        // Lifting operator penalty
};

double default_eta_beta(int p, double alpha1, double alpha2);

// Kappa weights per cell (zero pair for uncut cells). Falls back to the
// plain area-fraction weighting when c0*h_K >= 1/2, i.e. when the mesh is
// too coarse for the switching thresholds to be admissible.
std::vector<std::pair<double, double>> make_kappa_weights(const std::vector<CutCell>& cuts,
                                                          double c0, double h_K);

SparseSystem assemble_ip(const XfeSpace& space, const std::vector<CutCell>& cuts,
                         const std::vector<std::pair<double, double>>& kappa,
                         const ProblemData& problem, const SchemeParams& params);

SparseSystem assemble_lifting(const XfeSpace& space, const std::vector<CutCell>& cuts,
                              const std::vector<std::pair<double, double>>& kappa,
                              const ProblemData& problem, const SchemeParams& params);

// Scaled/shifted monomial frame for the local lifting spaces; m_k with
// multi-degree (a,b), |a+b| <= p, evaluated as ((x-cx)/sx)^a ((y-cy)/sy)^b.
struct MonomialFrame {
    Vec2 center{0.5, 0.5};
    Vec2 scale{1.0, 1.0};
    int p = 1;

    int size() const { return (p + 1) * (p + 2) / 2; }
    void eval(Vec2 x, std::vector<double>& values) const;
    void eval_grad(Vec2 x, std::vector<Vec2>& grads) const;
};

// r_e(q) for one cut cell: per-side coefficient vectors (by component) in
// the per-side monomial frames. Sides with kappa_i = 0 come back empty.
struct LiftingCoeffs {
    MonomialFrame frame1, frame2;
    std::vector<double> r1x, r1y, r2x, r2y;

    // value of r_e(q) on side i at x (zero if that side is empty)
    Vec2 eval(int side, Vec2 x) const;
};

// Solves the defining equations of the local lifting operator for data q
// given at the cell's interface quadrature points.
LiftingCoeffs local_lifting(const CutCell& cell, std::pair<double, double> kappa, double alpha1,
                            double alpha2, const std::vector<Vec2>& q_values, int p);

// Max over non-Dirichlet test functions of |B(w,phi_j) - F(phi_j)| scaled by
// sqrt(|A_jj|); vanishes (to quadrature accuracy) when w interpolates a
// solution the scheme is consistent for.
double residual_consistency(const SparseSystem& sys, const std::vector<double>& w,
                            const std::vector<int>& dirichlet_dofs);

}  // namespace dgxfem
