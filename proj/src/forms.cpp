#include "dgxfem/forms.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <iostream>

namespace dgxfem {

ProblemData make_zero_problem(double alpha1, double alpha2) {
    ProblemData p;
    p.alpha1 = alpha1;
    p.alpha2 = alpha2;
    p.f1 = [](Vec2) { return 0.0; };
    p.f2 = [](Vec2) { return 0.0; };
    p.g_neumann = [](Vec2) { return 0.0; };
    p.g_dirichlet_jump = [](Vec2) { return 0.0; };
    return p;
}

ProblemData make_reference_problem(double alpha1, double alpha2) {
    ProblemData p = make_zero_problem(alpha1, alpha2);
    p.has_exact = true;
    p.u1 = [alpha1](Vec2 x) { return std::exp(x.x * x.y) / alpha1; };
    p.grad_u1 = [alpha1](Vec2 x) {
        const double e = std::exp(x.x * x.y) / alpha1;
        return Vec2{x.y * e, x.x * e};
    };
    p.u2 = [alpha2](Vec2 x) { return std::sin(M_PI * x.x) * std::sin(M_PI * x.y) / alpha2; };
    p.grad_u2 = [alpha2](Vec2 x) {
        return Vec2{M_PI * std::cos(M_PI * x.x) * std::sin(M_PI * x.y) / alpha2,
                    M_PI * std::sin(M_PI * x.x) * std::cos(M_PI * x.y) / alpha2};
    };
    p.f1 = [](Vec2 x) { return -(x.x * x.x + x.y * x.y) * std::exp(x.x * x.y); };
    p.f2 = [](Vec2 x) { return 2.0 * M_PI * M_PI * std::sin(M_PI * x.x) * std::sin(M_PI * x.y); };

    // alpha-scaled flux jump (alpha1 grad u1 - alpha2 grad u2) . n1 on the circle
    const Vec2 center{0.5, 0.5};
    auto flux1 = [](Vec2 x) {
        const double e = std::exp(x.x * x.y);
        return Vec2{x.y * e, x.x * e};
    };
    auto flux2 = [](Vec2 x) {
        return Vec2{M_PI * std::cos(M_PI * x.x) * std::sin(M_PI * x.y),
                    M_PI * std::sin(M_PI * x.x) * std::cos(M_PI * x.y)};
    };
    p.g_neumann = [center, flux1, flux2](Vec2 x) {
        const Vec2 n1 = (x - center).normalized();
        return (flux1(x) - flux2(x)).dot(n1);
    };
    auto u1 = p.u1;
    auto u2 = p.u2;
    p.g_dirichlet_jump = [u1, u2](Vec2 x) { return u1(x) - u2(x); };
    return p;
}

double default_eta_beta(int p, double alpha1, double alpha2) {
    return 20.0 * p * p * std::max(alpha1, alpha2) / std::min(alpha1, alpha2);
}

std::vector<std::pair<double, double>> make_kappa_weights(const std::vector<CutCell>& cuts,
                                                          double c0, double h_K) {
    std::vector<std::pair<double, double>> kappa(cuts.size(), {0.0, 0.0});
    const bool thresholds_admissible = c0 * h_K < 0.5;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        if (!cuts[i].is_cut()) continue;
        if (thresholds_admissible) {
            kappa[i] = compute_kappa(cuts[i], c0, h_K);
        } else {
            const double frac = cuts[i].measure1 / (cuts[i].measure1 + cuts[i].measure2);
            kappa[i] = {frac, 1.0 - frac};
        }
    }
    return kappa;
}

void MonomialFrame::eval(Vec2 x, std::vector<double>& values) const {
    values.clear();
    const double u = (x.x - center.x) / scale.x;
    const double v = (x.y - center.y) / scale.y;
    for (int total = 0; total <= p; ++total)
        for (int a = total; a >= 0; --a)
            values.push_back(std::pow(u, a) * std::pow(v, total - a));
}

void MonomialFrame::eval_grad(Vec2 x, std::vector<Vec2>& grads) const {
    grads.clear();
    const double u = (x.x - center.x) / scale.x;
    const double v = (x.y - center.y) / scale.y;
    for (int total = 0; total <= p; ++total)
        for (int a = total; a >= 0; --a) {
            const int b = total - a;
            grads.push_back({a == 0 ? 0.0 : a * std::pow(u, a - 1) * std::pow(v, b) / scale.x,
                             b == 0 ? 0.0 : b * std::pow(u, a) * std::pow(v, b - 1) / scale.y});
        }
}

Vec2 LiftingCoeffs::eval(int side, Vec2 x) const {
    const MonomialFrame& fr = (side == 1) ? frame1 : frame2;
    const std::vector<double>& cx = (side == 1) ? r1x : r2x;
    const std::vector<double>& cy = (side == 1) ? r1y : r2y;
    if (cx.empty()) return {0.0, 0.0};
    std::vector<double> m;
    fr.eval(x, m);
    Vec2 val{0.0, 0.0};
    for (std::size_t k = 0; k < m.size(); ++k) {
        val.x += cx[k] * m[k];
        val.y += cy[k] * m[k];
    }
    return val;
}

namespace {

struct SideFrameData {
    MonomialFrame frame;
    Eigen::MatrixXd mass;  // unweighted Gram of the frame over K_i
    Eigen::LDLT<Eigen::MatrixXd> solver;
    bool usable = false;
};

Eigen::MatrixXd frame_gram(const MonomialFrame& frame, const QuadRule& quad) {
    const int nm = frame.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nm, nm);
    std::vector<double> m;
    for (std::size_t q = 0; q < quad.size(); ++q) {
        frame.eval(quad.points[q], m);
        for (int i = 0; i < nm; ++i)
            for (int j = 0; j <= i; ++j) g(i, j) += quad.weights[q] * m[i] * m[j];
    }
    for (int i = 0; i < nm; ++i)
        for (int j = i + 1; j < nm; ++j) g(i, j) = g(j, i);
    return g;
}

double condition_estimate(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0) return 1e300;
    return hi / lo;
}

MonomialFrame bounding_frame(const QuadRule& quad, int p) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Vec2& pt : quad.points) {
        xmin = std::min(xmin, pt.x);
        xmax = std::max(xmax, pt.x);
        ymin = std::min(ymin, pt.y);
        ymax = std::max(ymax, pt.y);
    }
    MonomialFrame fr;
    fr.p = p;
    fr.center = {0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    fr.scale = {std::max(0.5 * (xmax - xmin), 1e-300), std::max(0.5 * (ymax - ymin), 1e-300)};
    return fr;
}

// Build the monomial frame and factorized mass matrix for one sub-element.
// Starts from the cell-sized frame and falls back to the sub-element bounding
// box when the Gram matrix is too ill-conditioned to invert reliably.
SideFrameData make_side_frame(const QuadRule& quad, Vec2 cell_center, double cell_h, int p) {
    SideFrameData data;
    if (quad.empty()) return data;
    data.frame = MonomialFrame{cell_center, {0.5 * cell_h, 0.5 * cell_h}, p};
    data.mass = frame_gram(data.frame, quad);
    if (condition_estimate(data.mass) > 1e14) {
        data.frame = bounding_frame(quad, p);
        data.mass = frame_gram(data.frame, quad);
        if (condition_estimate(data.mass) > 1e14)
            throw IllConditionedMass("lifting mass matrix condition exceeds 1e14");
    }
    data.solver.compute(data.mass);
    data.usable = true;
    return data;
}

// mass solve with one step of iterative refinement
Eigen::VectorXd refined_solve(const SideFrameData& side, const Eigen::VectorXd& rhs) {
    Eigen::VectorXd x = side.solver.solve(rhs);
    x += side.solver.solve(rhs - side.mass * x);
    return x;
}

}  // namespace

LiftingCoeffs local_lifting(const CutCell& cell, std::pair<double, double> kappa, double alpha1,
                            double alpha2, const std::vector<Vec2>& q_values, int p) {
    if (!cell.is_cut()) throw Error("local_lifting: cell is not cut");
    if (q_values.size() != cell.quad_e.size())
        throw Error("local_lifting: data size does not match interface rule");

    LiftingCoeffs out;
    const double kap[2] = {kappa.first, kappa.second};
    (void)alpha1;
    (void)alpha2;  // constant alpha cancels between the mass and the moment

    // the owning cell box, recovered from the boundary chains
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto* chain : {&cell.chain1, &cell.chain2})
        for (const Vec2& pt : *chain) {
            xmin = std::min(xmin, pt.x);
            xmax = std::max(xmax, pt.x);
            ymin = std::min(ymin, pt.y);
            ymax = std::max(ymax, pt.y);
        }
    const Vec2 cell_center{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)};
    const double cell_h = std::max(xmax - xmin, ymax - ymin);

    for (int side = 1; side <= 2; ++side) {
        const QuadRule& quad = cell.quad(side);
        std::vector<double>& rx = (side == 1) ? out.r1x : out.r2x;
        std::vector<double>& ry = (side == 1) ? out.r1y : out.r2y;
        if (kap[side - 1] == 0.0 || quad.empty()) continue;

        SideFrameData data = make_side_frame(quad, cell_center, cell_h, p);
        const int nm = data.frame.size();
        Eigen::VectorXd bx = Eigen::VectorXd::Zero(nm), by = Eigen::VectorXd::Zero(nm);
        std::vector<double> m;
        for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
            data.frame.eval(cell.quad_e.points[q], m);
            for (int j = 0; j < nm; ++j) {
                bx(j) += cell.quad_e.weights[q] * q_values[q].x * m[j];
                by(j) += cell.quad_e.weights[q] * q_values[q].y * m[j];
            }
        }
        const Eigen::VectorXd rxv = -kap[side - 1] * refined_solve(data, bx);
        const Eigen::VectorXd ryv = -kap[side - 1] * refined_solve(data, by);
        rx.assign(rxv.data(), rxv.data() + nm);
        ry.assign(ryv.data(), ryv.data() + nm);
        ((side == 1) ? out.frame1 : out.frame2) = data.frame;
    }
    return out;
}

namespace {

class Assembler {
public:
    Assembler(const XfeSpace& space, const std::vector<CutCell>& cuts,
              const std::vector<std::pair<double, double>>& kappa, const ProblemData& problem,
              const SchemeParams& params)
        : space_(space),
          cuts_(cuts),
          kappa_(kappa),
          prob_(problem),
          params_(params),
          nloc_(space.basis().size()),
          h_(space.mesh().h),
          h_K_(space.mesh().h_diam()) {}

    SparseSystem run() {
        const int n = space_.ndof();
        rhs_.assign(n, 0.0);
        local_.resize(2 * nloc_ * 2 * nloc_);
        local_rhs_.resize(2 * nloc_);
        dofs1_.resize(nloc_);
        dofs2_.resize(nloc_);
        for (int id = 0; id < space_.mesh().num_cells(); ++id) assemble_cell(id);
        apply_dirichlet();
        SparseSystem sys;
        sys.A = CsrMatrix::from_triplets(n, std::move(triplets_));
        sys.b = std::move(rhs_);
        return sys;
    }

private:
    double& loc(int i, int j) { return local_[i * 2 * nloc_ + j]; }

    void assemble_cell(int id) {
        std::fill(local_.begin(), local_.end(), 0.0);
        std::fill(local_rhs_.begin(), local_rhs_.end(), 0.0);
        const CutCell& cell = cuts_[id];
        space_.cell_dofs(id, 1, dofs1_);
        space_.cell_dofs(id, 2, dofs2_);

        for (int side = 1; side <= 2; ++side) volume_terms(id, cell, side);
        if (cell.is_cut()) {
            interface_terms(id, cell);
            if (params_.scheme == Scheme::Lifting) lifting_terms(id, cell);
        }
        scatter();
    }

    void volume_terms(int id, const CutCell& cell, int side) {
        const QuadRule& quad = cell.quad(side);
        if (quad.empty()) return;
        const double alpha = prob_.alpha(side);
        const ScalarField& f = (side == 1) ? prob_.f1 : prob_.f2;
        const int off = (side - 1) * nloc_;
        for (std::size_t q = 0; q < quad.size(); ++q) {
            const Vec2 x = quad.points[q];
            const double w = quad.weights[q];
            space_.basis().eval(space_.to_ref(id, x), vals_);
            space_.basis().eval_grad(space_.to_ref(id, x), grads_);
            for (Vec2& g : grads_) g = g * (1.0 / h_);
            for (int a = 0; a < nloc_; ++a) {
                local_rhs_[off + a] += w * f(x) * vals_[a];
                for (int b = 0; b < nloc_; ++b)
                    loc(off + a, off + b) += w * alpha * grads_[a].dot(grads_[b]);
            }
        }
    }

    void interface_terms(int id, const CutCell& cell) {
        const auto [k1, k2] = kappa_[id];
        const double kap[2] = {k1, k2};
        const double alpha[2] = {prob_.alpha1, prob_.alpha2};
        const double zeta[2] = {1.0, -1.0};
        const double beta = (params_.scheme == Scheme::Lifting) ? 1.0 : params_.beta;
        const double pen =
            ((params_.scheme == Scheme::Lifting) ? params_.eta1 : params_.eta_beta) / h_K_;

        for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
            const Vec2 x = cell.quad_e.points[q];
            const Vec2 n1 = cell.quad_e.normals[q];
            const double w = cell.quad_e.weights[q];
            space_.basis().eval(space_.to_ref(id, x), vals_);
            space_.basis().eval_grad(space_.to_ref(id, x), grads_);
            for (Vec2& g : grads_) g = g * (1.0 / h_);

            const double gn = prob_.g_neumann(x);
            const double j = prob_.g_dirichlet_jump(x);

            for (int sv = 0; sv < 2; ++sv) {
                const int offv = sv * nloc_;
                for (int a = 0; a < nloc_; ++a) {
                    const double va = vals_[a];
                    const double flux_a = kap[sv] * alpha[sv] * grads_[a].dot(n1);
                    // loads: swapped-kappa Neumann weighting, then the two
                    // Dirichlet-jump terms of the linear form
                    local_rhs_[offv + a] += w * (gn * kap[1 - sv] * va -
                                                 beta * j * flux_a + pen * j * zeta[sv] * va);
                    for (int sw = 0; sw < 2; ++sw) {
                        const int offw = sw * nloc_;
                        for (int b = 0; b < nloc_; ++b) {
                            const double flux_b = kap[sw] * alpha[sw] * grads_[b].dot(n1);
                            loc(offv + a, offw + b) +=
                                w * (-flux_b * zeta[sv] * va      // consistency
                                     - beta * zeta[sw] * vals_[b] * flux_a  // (anti)symmetry
                                     + pen * zeta[sv] * zeta[sw] * va * vals_[b]);
                        }
                    }
                }
            }
        }
    }

    void lifting_terms(int id, const CutCell& cell) {
        const auto [k1, k2] = kappa_[id];
        const double kap[2] = {k1, k2};
        const double alpha[2] = {prob_.alpha1, prob_.alpha2};
        const double zeta[2] = {1.0, -1.0};
        const Vec2 center = space_.mesh().cell_origin(id) + Vec2{0.5 * h_, 0.5 * h_};
        const int p = space_.degree();

        for (int side = 0; side < 2; ++side) {
            if (kap[side] == 0.0 || cell.quad(side + 1).empty()) continue;
            const SideFrameData frame = make_side_frame(cell.quad(side + 1), center, h_, p);
            const int nm = frame.frame.size();

            // moment matrices R_c[j, a] = int_e phi_a n1_c m_j and the g_D
            // moments t_c[j] = int_e j n1_c m_j
            Eigen::MatrixXd Rx = Eigen::MatrixXd::Zero(nm, nloc_);
            Eigen::MatrixXd Ry = Eigen::MatrixXd::Zero(nm, nloc_);
            Eigen::VectorXd tx = Eigen::VectorXd::Zero(nm), ty = Eigen::VectorXd::Zero(nm);
            std::vector<double> m;
            for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
                const Vec2 x = cell.quad_e.points[q];
                const Vec2 n1 = cell.quad_e.normals[q];
                const double w = cell.quad_e.weights[q];
                const double jval = prob_.g_dirichlet_jump(x);
                space_.basis().eval(space_.to_ref(id, x), vals_);
                frame.frame.eval(x, m);
                for (int jm = 0; jm < nm; ++jm) {
                    const double wx = w * m[jm] * n1.x;
                    const double wy = w * m[jm] * n1.y;
                    for (int a = 0; a < nloc_; ++a) {
                        Rx(jm, a) += wx * vals_[a];
                        Ry(jm, a) += wy * vals_[a];
                    }
                    tx(jm) += wx * jval;
                    ty(jm) += wy * jval;
                }
            }

            const double factor = params_.eta * alpha[side] * kap[side] * kap[side];
            const Eigen::MatrixXd MinvRx = frame.solver.solve(Rx);
            const Eigen::MatrixXd MinvRy = frame.solver.solve(Ry);
            const Eigen::MatrixXd S = factor * (Rx.transpose() * MinvRx + Ry.transpose() * MinvRy);
            const Eigen::VectorXd load =
                factor * (MinvRx.transpose() * tx + MinvRy.transpose() * ty);

            for (int sv = 0; sv < 2; ++sv) {
                for (int a = 0; a < nloc_; ++a) {
                    local_rhs_[sv * nloc_ + a] += zeta[sv] * load(a);
                    for (int sw = 0; sw < 2; ++sw)
                        for (int b = 0; b < nloc_; ++b)
                            loc(sv * nloc_ + a, sw * nloc_ + b) += zeta[sv] * zeta[sw] * S(a, b);
                }
            }
        }
    }

    void scatter() {
        for (int sa = 0; sa < 2; ++sa) {
            const std::vector<int>& rows = (sa == 0) ? dofs1_ : dofs2_;
            for (int a = 0; a < nloc_; ++a) {
                const int ga = rows[a];
                if (ga < 0) continue;
                rhs_[ga] += local_rhs_[sa * nloc_ + a];
                for (int sb = 0; sb < 2; ++sb) {
                    const std::vector<int>& cols = (sb == 0) ? dofs1_ : dofs2_;
                    for (int b = 0; b < nloc_; ++b) {
                        const int gb = cols[b];
                        const double v = loc(sa * nloc_ + a, sb * nloc_ + b);
                        if (gb < 0 || v == 0.0) continue;
                        triplets_.push_back({ga, gb, v});
                    }
                }
            }
        }
    }

    void apply_dirichlet() {
        const int n = space_.ndof();
        std::vector<char> is_bd(n, 0);
        std::vector<double> g(n, 0.0);
        for (int node = 0; node < space_.num_nodes(); ++node) {
            if (!space_.node_on_boundary(node)) continue;
            const Vec2 x = space_.node_coord(node);
            for (int side = 1; side <= 2; ++side) {
                const int d = space_.dof(node, side);
                if (d < 0) continue;
                is_bd[d] = 1;
                if (prob_.has_exact) g[d] = (side == 1) ? prob_.u1(x) : prob_.u2(x);
            }
        }
        // symmetric elimination: move columns to the rhs, identity rows
        std::vector<Triplet> kept;
        kept.reserve(triplets_.size());
        for (const Triplet& t : triplets_) {
            if (is_bd[t.row]) continue;
            if (is_bd[t.col]) {
                rhs_[t.row] -= t.value * g[t.col];
                continue;
            }
            kept.push_back(t);
        }
        for (int i = 0; i < n; ++i)
            if (is_bd[i]) {
                kept.push_back({i, i, 1.0});
                rhs_[i] = g[i];
            }
        triplets_ = std::move(kept);
    }

    const XfeSpace& space_;
    const std::vector<CutCell>& cuts_;
    const std::vector<std::pair<double, double>>& kappa_;
    const ProblemData& prob_;
    const SchemeParams& params_;
    const int nloc_;
    const double h_;
    const double h_K_;

    std::vector<Triplet> triplets_;
    std::vector<double> rhs_;
    std::vector<double> local_, local_rhs_;
    std::vector<double> vals_;
    std::vector<Vec2> grads_;
    std::vector<int> dofs1_, dofs2_;
};

}  // namespace

SparseSystem assemble_ip(const XfeSpace& space, const std::vector<CutCell>& cuts,
                         const std::vector<std::pair<double, double>>& kappa,
                         const ProblemData& problem, const SchemeParams& params) {
    SchemeParams p = params;
    p.scheme = Scheme::IP;
    return Assembler(space, cuts, kappa, problem, p).run();
}

SparseSystem assemble_lifting(const XfeSpace& space, const std::vector<CutCell>& cuts,
                              const std::vector<std::pair<double, double>>& kappa,
                              const ProblemData& problem, const SchemeParams& params) {
    SchemeParams p = params;
    p.scheme = Scheme::Lifting;
    if (p.eta1 < 1.0 || p.eta < 2.0)
        std::cerr << "warning: lifting scheme stability requires eta1 >= 1 and eta >= 2 "
                     "(got eta1="
                  << p.eta1 << ", eta=" << p.eta << ")\n";
    return Assembler(space, cuts, kappa, problem, p).run();
}

double residual_consistency(const SparseSystem& sys, const std::vector<double>& w,
                            const std::vector<int>& dirichlet_dofs) {
    std::vector<double> r(sys.size());
    sys.A.multiply(w, r);
    for (int i = 0; i < sys.size(); ++i) r[i] -= sys.b[i];
    std::vector<char> skip(sys.size(), 0);
    for (int d : dirichlet_dofs) skip[d] = 1;
    const std::vector<double> diag = sys.A.diagonal();
    double worst = 0.0;
    for (int i = 0; i < sys.size(); ++i) {
        if (skip[i]) continue;
        const double scale = std::sqrt(std::max(std::abs(diag[i]), 1e-300));
        worst = std::max(worst, std::abs(r[i]) / scale);
    }
    return worst;
}

}  // namespace dgxfem
