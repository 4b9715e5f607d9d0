#pragma once

#include <vector>

#include "dgxfem/forms.hpp"

namespace dgxfem {

// One sweep of a trace/inverse-inequality experiment: extremal Rayleigh
// ratios over a parameter grid, found as generalized eigenvalues of Gram
// matrix pencils (exact suprema over the polynomial space, no sampling).
struct SweepReport {
    std::vector<double> parameters;
    std::vector<double> ratios;
    double max_ratio = 0.0;
    double max_location = 0.0;

    void finalize();
};

// Sharp constant C(lambda,p) with ||v||_{L2(0,1)} <= C ||v||_{L2(0,lambda)}
// for every 1-d polynomial of degree <= p.
double norm_equiv_1d(int p, double lambda);

// Same constant measured on the square: ||v||_{L2([0,1]^2)} over
// ||v||_{L2([0,lambda]^2)} for tensor polynomials; tensorization predicts
// norm_equiv_1d(p, lambda)^2.
double norm_equiv_square(int p, double lambda);

// Weighted trace ratio kappa_i ||v||^2_{L2(e)} h_K / ||v||^2_{L2(K_i)} of the
// degenerating sub-element on the unit cell cut at offset t (straight line
// x = t and a circular arc of comparable position), maximized over
// v in P_p(K_i). kappa_threshold plays the role of c0*h_K; use_kappa=false
// freezes kappa=1 to expose the unweighted blow-up.
SweepReport kappa_trace_sweep(int p, const std::vector<double>& offsets, double kappa_threshold,
                              bool use_kappa);

struct ConvexSweepReport {
    SweepReport gradient;  // r (||grad v|| / ||v||)^2
    SweepReport trace;     // r (||v||_{dT} / ||v||_T)^2
};

// Random convex polygons in the unit box; r is the inscribed radius.
ConvexSweepReport convex_inverse_sweep(int p, int samples, unsigned long seed);

// ||v||^2_{L2(e_K)} / (h^{-1}||v||^2_{L2(K)} + h ||grad v||^2_{L2(K)}) on the
// unit cell (h = 1), maximized over v in P_p(K), swept over cut offsets.
SweepReport trace_ineq_check(int p, const std::vector<double>& offsets, bool include_arcs = true);

// ||r_e(q)||_{L2(K)} h_K^{1/2} / ||q||_{L2(e)} maximized over polynomial
// vector data q on e, swept over straight-cut offsets.
SweepReport lifting_bound_check(int p, const std::vector<double>& offsets,
                                double kappa_threshold);

// Helpers shared with the tests.
std::vector<Vec2> convex_hull(std::vector<Vec2> points);
// center and radius of the largest inscribed circle of a convex polygon
std::pair<Vec2, double> inscribed_circle(const std::vector<Vec2>& polygon);
// unit cell cut by a circular arc that stays within sagitta < t of the
// straight cut x = t (single-graph geometry for every offset)
CutCell unit_cell_arc_cut(double t, int quad_degree);
CutCell unit_cell_line_cut(double t, int quad_degree);

}  // namespace dgxfem
