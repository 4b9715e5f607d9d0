#include "dgxfem/analysis.hpp"

#include <cmath>
#include <limits>

namespace dgxfem {

namespace {

// accumulate coefficient * basis over one cell side; inactive dofs count as 0
void gather(const XfeSpace& space, const std::vector<double>& coeff, int cell_id, int side,
            std::vector<double>& local) {
    std::vector<int> dofs;
    space.cell_dofs(cell_id, side, dofs);
    local.resize(dofs.size());
    for (std::size_t k = 0; k < dofs.size(); ++k) local[k] = dofs[k] >= 0 ? coeff[dofs[k]] : 0.0;
}

}  // namespace

double eval_uh(const XfeSpace& space, const std::vector<double>& coeff, int cell_id, int side,
               Vec2 x) {
    std::vector<double> local, vals;
    gather(space, coeff, cell_id, side, local);
    space.basis().eval(space.to_ref(cell_id, x), vals);
    double s = 0.0;
    for (std::size_t k = 0; k < vals.size(); ++k) s += local[k] * vals[k];
    return s;
}

Vec2 eval_grad_uh(const XfeSpace& space, const std::vector<double>& coeff, int cell_id, int side,
                  Vec2 x) {
    std::vector<double> local;
    std::vector<Vec2> grads;
    gather(space, coeff, cell_id, side, local);
    space.basis().eval_grad(space.to_ref(cell_id, x), grads);
    Vec2 g{0.0, 0.0};
    for (std::size_t k = 0; k < grads.size(); ++k) g = g + local[k] * grads[k];
    return g * (1.0 / space.mesh().h);
}

double broken_h1_error(const std::vector<double>& u_h, const ProblemData& problem,
                       const XfeSpace& space, const std::vector<CutCell>& cuts) {
    std::vector<double> local, vals;
    std::vector<Vec2> grads;
    double total = 0.0;
    const double invh = 1.0 / space.mesh().h;
    for (int id = 0; id < space.mesh().num_cells(); ++id) {
        for (int side = 1; side <= 2; ++side) {
            const QuadRule& quad = cuts[id].quad(side);
            if (quad.empty()) continue;
            const double alpha = problem.alpha(side);
            const VectorField& gexact = (side == 1) ? problem.grad_u1 : problem.grad_u2;
            gather(space, u_h, id, side, local);
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const Vec2 x = quad.points[q];
                space.basis().eval_grad(space.to_ref(id, x), grads);
                Vec2 g{0.0, 0.0};
                for (std::size_t k = 0; k < grads.size(); ++k) g = g + local[k] * grads[k];
                g = g * invh;
                const Vec2 diff = gexact(x) - g;
                total += quad.weights[q] * alpha * diff.dot(diff);
            }
        }
    }
    return std::sqrt(total);
}

double l2_error(const std::vector<double>& u_h, const ProblemData& problem, const XfeSpace& space,
                const std::vector<CutCell>& cuts) {
    std::vector<double> local, vals;
    double total = 0.0;
    for (int id = 0; id < space.mesh().num_cells(); ++id) {
        for (int side = 1; side <= 2; ++side) {
            const QuadRule& quad = cuts[id].quad(side);
            if (quad.empty()) continue;
            const ScalarField& uexact = (side == 1) ? problem.u1 : problem.u2;
            gather(space, u_h, id, side, local);
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const Vec2 x = quad.points[q];
                space.basis().eval(space.to_ref(id, x), vals);
                double v = 0.0;
                for (std::size_t k = 0; k < vals.size(); ++k) v += local[k] * vals[k];
                const double diff = uexact(x) - v;
                total += quad.weights[q] * diff * diff;
            }
        }
    }
    return std::sqrt(total);
}

namespace {

double jump_accumulate(const std::vector<double>& v, const XfeSpace& space,
                       const std::vector<CutCell>& cuts, double eta, const ScalarField* j_exact) {
    std::vector<double> loc1, loc2, vals;
    double total = 0.0;
    const double h_K = space.mesh().h_diam();
    for (int id = 0; id < space.mesh().num_cells(); ++id) {
        const CutCell& cell = cuts[id];
        if (!cell.is_cut()) continue;
        gather(space, v, id, 1, loc1);
        gather(space, v, id, 2, loc2);
        double cell_sum = 0.0;
        for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
            const Vec2 x = cell.quad_e.points[q];
            space.basis().eval(space.to_ref(id, x), vals);
            double v1 = 0.0, v2 = 0.0;
            for (std::size_t k = 0; k < vals.size(); ++k) {
                v1 += loc1[k] * vals[k];
                v2 += loc2[k] * vals[k];
            }
            double jump = v1 - v2;
            if (j_exact) jump = (*j_exact)(x) - jump;
            cell_sum += cell.quad_e.weights[q] * jump * jump;
        }
        total += eta / h_K * cell_sum;
    }
    return std::sqrt(total);
}

}  // namespace

double jump_seminorm(const std::vector<double>& v, const XfeSpace& space,
                     const std::vector<CutCell>& cuts, double eta) {
    return jump_accumulate(v, space, cuts, eta, nullptr);
}

double jump_error(const std::vector<double>& u_h, const ProblemData& problem,
                  const XfeSpace& space, const std::vector<CutCell>& cuts, double eta) {
    return jump_accumulate(u_h, space, cuts, eta, &problem.g_dirichlet_jump);
}

double lifting_error(const std::vector<double>& u_h, const ProblemData& problem,
                     const XfeSpace& space, const std::vector<CutCell>& cuts,
                     const std::vector<std::pair<double, double>>& kappa, double eta) {
    std::vector<double> loc1, loc2, vals;
    double total = 0.0;
    const int p = space.degree();
    for (int id = 0; id < space.mesh().num_cells(); ++id) {
        const CutCell& cell = cuts[id];
        if (!cell.is_cut()) continue;
        gather(space, u_h, id, 1, loc1);
        gather(space, u_h, id, 2, loc2);

        // jump of the error as vector data on the interface points
        std::vector<Vec2> qdata(cell.quad_e.size());
        for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
            const Vec2 x = cell.quad_e.points[q];
            space.basis().eval(space.to_ref(id, x), vals);
            double v1 = 0.0, v2 = 0.0;
            for (std::size_t k = 0; k < vals.size(); ++k) {
                v1 += loc1[k] * vals[k];
                v2 += loc2[k] * vals[k];
            }
            const double jump = problem.g_dirichlet_jump(x) - (v1 - v2);
            qdata[q] = cell.quad_e.normals[q] * jump;
        }
        const LiftingCoeffs r =
            local_lifting(cell, kappa[id], problem.alpha1, problem.alpha2, qdata, p);
        for (int side = 1; side <= 2; ++side) {
            const QuadRule& quad = cell.quad(side);
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const Vec2 val = r.eval(side, quad.points[q]);
                total += eta * problem.alpha(side) * quad.weights[q] * val.dot(val);
            }
        }
    }
    return std::sqrt(total);
}

std::vector<double> rates(const std::vector<double>& errors) {
    std::vector<double> out;
    for (std::size_t k = 1; k < errors.size(); ++k) {
        if (errors[k - 1] <= 0.0 || errors[k] <= 0.0)
            out.push_back(std::numeric_limits<double>::quiet_NaN());
        else
            out.push_back(std::log2(errors[k - 1] / errors[k]));
    }
    return out;
}

}  // namespace dgxfem
