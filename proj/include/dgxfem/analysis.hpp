#pragma once

#include <vector>

#include "dgxfem/forms.hpp"

namespace dgxfem {

// Per-refinement errors in the norms of the error analysis, plus observed
// rates between consecutive mesh halvings.
struct ErrorReport {
    double h = 0.0;
    int ndof = 0;
    double err_l2 = 0.0;
    double err_h1_broken = 0.0;  // alpha^{1/2}-weighted broken H1 seminorm
    double err_jump = 0.0;       // eta-weighted interface jump seminorm
    double err_lift = 0.0;       // lifting seminorm (Lifting scheme only)
};

// Discrete function evaluation helpers: value/gradient of the side-i
// restriction of a coefficient vector at a physical point inside a cell.
double eval_uh(const XfeSpace& space, const std::vector<double>& coeff, int cell_id, int side,
               Vec2 x);
Vec2 eval_grad_uh(const XfeSpace& space, const std::vector<double>& coeff, int cell_id, int side,
                  Vec2 x);

// sqrt( sum_K sum_i int_{K_i} alpha_i |grad(u - u_h)|^2 )
double broken_h1_error(const std::vector<double>& u_h, const ProblemData& problem,
                       const XfeSpace& space, const std::vector<CutCell>& cuts);

// plain L2 norm of u - u_h over both sub-domains
double l2_error(const std::vector<double>& u_h, const ProblemData& problem, const XfeSpace& space,
                const std::vector<CutCell>& cuts);

// sqrt( sum_K eta h_K^{-1} || [v] ||^2_{L2(e_K)} ) of a discrete function
double jump_seminorm(const std::vector<double>& v, const XfeSpace& space,
                     const std::vector<CutCell>& cuts, double eta);

// jump seminorm of the error, using the exact jump datum j on Gamma
double jump_error(const std::vector<double>& u_h, const ProblemData& problem,
                  const XfeSpace& space, const std::vector<CutCell>& cuts, double eta);

// sqrt( sum_K eta || alpha^{1/2} r_e([u - u_h]) ||^2_{L2(K)} )
double lifting_error(const std::vector<double>& u_h, const ProblemData& problem,
                     const XfeSpace& space, const std::vector<CutCell>& cuts,
                     const std::vector<std::pair<double, double>>& kappa, double eta);

// rate_k = log2(err_{k-1} / err_k) for consecutive h halvings; NaN where an
// error is non-positive.
std::vector<double> rates(const std::vector<double>& errors);

}  // namespace dgxfem
