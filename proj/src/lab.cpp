#include "dgxfem/lab.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace dgxfem {

void SweepReport::finalize() {
    max_ratio = 0.0;
    max_location = parameters.empty() ? 0.0 : parameters.front();
    for (std::size_t i = 0; i < ratios.size(); ++i)
        if (ratios[i] > max_ratio) {
            max_ratio = ratios[i];
            max_location = parameters[i];
        }
}

namespace {

// P_k(x) by the three-term recurrence; x may lie outside [-1,1]
double legendre(int k, double x) {
    double p0 = 1.0, p1 = x;
    if (k == 0) return p0;
    for (int j = 2; j <= k; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// basis orthonormal on [0,lambda]: b_k(x) = sqrt((2k+1)/lambda) P_k(2x/lambda - 1)
double small_interval_basis(int k, double x, double lambda) {
    return std::sqrt((2.0 * k + 1.0) / lambda) * legendre(k, 2.0 * x / lambda - 1.0);
}

double lambda_max_pencil(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

double lambda_max(const Eigen::MatrixXd& A) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Eigen::MatrixXd frame_mass(const MonomialFrame& frame, const QuadRule& quad) {
    const int nm = frame.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nm, nm);
    std::vector<double> m;
    for (std::size_t q = 0; q < quad.size(); ++q) {
        frame.eval(quad.points[q], m);
        for (int i = 0; i < nm; ++i)
            for (int j = 0; j <= i; ++j) g(i, j) += quad.weights[q] * m[i] * m[j];
    }
    return g.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd frame_stiffness(const MonomialFrame& frame, const QuadRule& quad) {
    const int nm = frame.size();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nm, nm);
    std::vector<Vec2> dm;
    for (std::size_t q = 0; q < quad.size(); ++q) {
        frame.eval_grad(quad.points[q], dm);
        for (int i = 0; i < nm; ++i)
            for (int j = 0; j <= i; ++j) g(i, j) += quad.weights[q] * dm[i].dot(dm[j]);
    }
    return g.selfadjointView<Eigen::Lower>();
}

MonomialFrame quad_bounding_frame(const QuadRule& quad, int p) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const Vec2& pt : quad.points) {
        xmin = std::min(xmin, pt.x);
        xmax = std::max(xmax, pt.x);
        ymin = std::min(ymin, pt.y);
        ymax = std::max(ymax, pt.y);
    }
    return MonomialFrame{{0.5 * (xmin + xmax), 0.5 * (ymin + ymax)},
                         {std::max(0.5 * (xmax - xmin), 1e-300),
                          std::max(0.5 * (ymax - ymin), 1e-300)},
                         p};
}

constexpr double kUnitCellDiam = 1.4142135623730951;  // h_K of the unit cell

}  // namespace

double norm_equiv_1d(int p, double lambda) {
    const int n = p + 1;
    const QuadRule1D g = gauss_segment(std::min(20, p + 1));
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t q = 0; q < g.points.size(); ++q) {
        const double x = 0.5 * (g.points[q] + 1.0);
        const double w = 0.5 * g.weights[q];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                G(i, j) += w * small_interval_basis(i, x, lambda) *
                           small_interval_basis(j, x, lambda);
    }
    return std::sqrt(lambda_max(Eigen::MatrixXd(G.selfadjointView<Eigen::Lower>())));
}

double norm_equiv_square(int p, double lambda) {
    const int n1 = p + 1;
    const int n = n1 * n1;
    const QuadRule rule = gauss_square(p + 1);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> bx(n1), by(n1);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = 0.5 * (rule.points[q].x + 1.0);
        const double y = 0.5 * (rule.points[q].y + 1.0);
        const double w = 0.25 * rule.weights[q];
        for (int k = 0; k < n1; ++k) {
            bx[k] = small_interval_basis(k, x, lambda);
            by[k] = small_interval_basis(k, y, lambda);
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
                G(i, j) += w * bx[i % n1] * by[i / n1] * bx[j % n1] * by[j / n1];
    }
    return std::sqrt(lambda_max(Eigen::MatrixXd(G.selfadjointView<Eigen::Lower>())));
}

CutCell unit_cell_line_cut(double t, int quad_degree) {
    const CartesianMesh mesh(1);
    const LevelSetInterface ls = make_line_interface({t, 0.0}, {1.0, 0.0});
    return build_cutcell(mesh, ls, 0, quad_degree);
}

CutCell unit_cell_arc_cut(double t, int quad_degree) {
    // radius grows as t -> 0 so the sagitta stays below t and the arc keeps
    // crossing the top and bottom edges (single graph over a vertical chord)
    const double radius = std::max(1.0, 0.25 / std::max(t, 1e-9));
    const CartesianMesh mesh(1);
    const LevelSetInterface ls = make_circle_interface({t - radius, 0.5}, radius);
    return build_cutcell(mesh, ls, 0, quad_degree);
}

SweepReport kappa_trace_sweep(int p, const std::vector<double>& offsets, double kappa_threshold,
                              bool use_kappa) {
    SweepReport report;
    const int deg = 2 * p + 4;
    for (const double t : offsets) {
        // ratio of the degenerating (smaller) sub-element; the other side is
        // covered by the mirrored offset
        double worst = 0.0;
        for (int variant = 0; variant < 2; ++variant) {
            const CutCell cell =
                variant == 0 ? unit_cell_line_cut(t, deg) : unit_cell_arc_cut(t, deg);
            if (!cell.is_cut()) continue;
            const double frac1 = cell.measure1 / (cell.measure1 + cell.measure2);
            double kap[2] = {1.0, 1.0};
            if (use_kappa) {
                if (frac1 < kappa_threshold)
                    kap[0] = 0.0;
                else if (frac1 > 1.0 - kappa_threshold)
                    kap[1] = 0.0;
                else {
                    kap[0] = frac1;
                    kap[1] = 1.0 - frac1;
                }
            }
            const int side = (cell.measure1 <= cell.measure2) ? 1 : 2;
            if (kap[side - 1] == 0.0 || cell.quad(side).empty()) continue;
            const MonomialFrame frame = quad_bounding_frame(cell.quad(side), p);
            const Eigen::MatrixXd B = frame_mass(frame, cell.quad(side));
            const Eigen::MatrixXd A = frame_mass(frame, cell.quad_e);
            worst = std::max(worst, kap[side - 1] * kUnitCellDiam * lambda_max_pencil(A, B));
        }
        report.parameters.push_back(t);
        report.ratios.push_back(worst);
    }
    report.finalize();
    return report;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return (a - b).norm() < 1e-14;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lo = k + 1; i > 0; --i) {  // upper hull
        while (k >= lo && (hull[k - 1] - hull[k - 2]).cross(pts[i - 1] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

std::pair<Vec2, double> inscribed_circle(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    std::vector<Vec2> normal(n);
    std::vector<double> offset(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = poly[(i + 1) % n] - poly[i];
        normal[i] = Vec2{d.y, -d.x}.normalized();  // outward for ccw polygons
        offset[i] = normal[i].dot(poly[i]);
    }
    auto depth = [&](Vec2 x) {
        double d = 1e300;
        for (std::size_t i = 0; i < n; ++i) d = std::min(d, offset[i] - normal[i].dot(x));
        return d;
    };
    Vec2 x = polygon_centroid(poly);
    double best = depth(x);
    double step = 0.25;
    const Vec2 dirs[8] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                          {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    while (step > 1e-13) {
        bool moved = false;
        for (const Vec2& d : dirs) {
            const Vec2 y = x + step * d;
            const double v = depth(y);
            if (v > best) {
                best = v;
                x = y;
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return {x, best};
}

ConvexSweepReport convex_inverse_sweep(int p, int samples, unsigned long seed) {
    ConvexSweepReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int deg = 2 * p + 4;
    const QuadRule1D edge_rule = gauss_segment(p + 2);

    for (int s = 0; s < samples; ++s) {
        std::vector<Vec2> hull;
        while (true) {
            std::vector<Vec2> pts(10);
            for (Vec2& pt : pts) pt = {uni(rng), uni(rng)};
            hull = convex_hull(std::move(pts));
            if (hull.size() >= 3 && std::abs(polygon_area(hull)) > 1e-10) break;
        }
        const auto [center, radius] = inscribed_circle(hull);
        (void)center;

        const MonomialFrame frame = [&] {
            QuadRule probe;
            probe.points = hull;
            return quad_bounding_frame(probe, p);
        }();
        const QuadRule vol = polygon_rule(hull, deg);
        const Eigen::MatrixXd M = frame_mass(frame, vol);
        const Eigen::MatrixXd S = frame_stiffness(frame, vol);

        QuadRule bnd;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Vec2 a = hull[i], b = hull[(i + 1) % hull.size()];
            const double len = (b - a).norm();
            for (std::size_t k = 0; k < edge_rule.points.size(); ++k) {
                const double tt = 0.5 * (edge_rule.points[k] + 1.0);
                bnd.points.push_back(a + tt * (b - a));
                bnd.weights.push_back(0.5 * edge_rule.weights[k] * len);
            }
        }
        const Eigen::MatrixXd Abnd = frame_mass(frame, bnd);

        report.gradient.parameters.push_back(s);
        report.gradient.ratios.push_back(radius * lambda_max_pencil(S, M));
        report.trace.parameters.push_back(s);
        report.trace.ratios.push_back(radius * lambda_max_pencil(Abnd, M));
    }
    report.gradient.finalize();
    report.trace.finalize();
    return report;
}

SweepReport trace_ineq_check(int p, const std::vector<double>& offsets, bool include_arcs) {
    SweepReport report;
    const int deg = 2 * p + 4;
    const MonomialFrame frame{{0.5, 0.5}, {0.5, 0.5}, p};
    // h = 1 on the unit cell: the denominator is M + S over the WHOLE cell
    for (const double t : offsets) {
        double worst = 0.0;
        for (int variant = 0; variant < (include_arcs ? 2 : 1); ++variant) {
            const CutCell cell =
                variant == 0 ? unit_cell_line_cut(t, deg) : unit_cell_arc_cut(t, deg);
            if (!cell.is_cut()) continue;
            QuadRule whole;  // K = K1 u K2
            for (int side = 1; side <= 2; ++side) {
                const QuadRule& q = cell.quad(side);
                whole.points.insert(whole.points.end(), q.points.begin(), q.points.end());
                whole.weights.insert(whole.weights.end(), q.weights.begin(), q.weights.end());
            }
            const Eigen::MatrixXd B = frame_mass(frame, whole) + frame_stiffness(frame, whole);
            const Eigen::MatrixXd A = frame_mass(frame, cell.quad_e);
            worst = std::max(worst, lambda_max_pencil(A, B));
        }
        report.parameters.push_back(t);
        report.ratios.push_back(worst);
    }
    report.finalize();
    return report;
}

SweepReport lifting_bound_check(int p, const std::vector<double>& offsets,
                                double kappa_threshold) {
    SweepReport report;
    const int deg = 2 * p + 4;
    const int nq1 = p + 1;      // scalar edge polynomials
    const int dim = 2 * nq1;    // two vector components

    for (const double t : offsets) {
        const CutCell cell = unit_cell_line_cut(t, deg);
        if (!cell.is_cut()) {
            report.parameters.push_back(t);
            report.ratios.push_back(0.0);
            continue;
        }
        const double frac1 = cell.measure1 / (cell.measure1 + cell.measure2);
        std::pair<double, double> kap{frac1, 1.0 - frac1};
        if (frac1 < kappa_threshold) kap = {0.0, 1.0};
        if (frac1 > 1.0 - kappa_threshold) kap = {1.0, 0.0};

        // edge basis: scaled monomials in y times a unit vector component
        auto edge_basis = [&](int k, Vec2 x) { return std::pow(2.0 * (x.y - 0.5), k % nq1); };
        auto edge_component = [&](int k) { return k < nq1 ? 0 : 1; };

        std::vector<LiftingCoeffs> lifted(dim);
        for (int k = 0; k < dim; ++k) {
            std::vector<Vec2> qvals(cell.quad_e.size(), {0.0, 0.0});
            for (std::size_t q = 0; q < cell.quad_e.size(); ++q) {
                const double v = edge_basis(k, cell.quad_e.points[q]);
                if (edge_component(k) == 0)
                    qvals[q].x = v;
                else
                    qvals[q].y = v;
            }
            lifted[k] = local_lifting(cell, kap, 1.0, 1.0, qvals, p);
        }

        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(dim, dim);
        for (int side = 1; side <= 2; ++side) {
            const QuadRule& quad = cell.quad(side);
            for (std::size_t q = 0; q < quad.size(); ++q) {
                std::vector<Vec2> vals(dim);
                for (int k = 0; k < dim; ++k) vals[k] = lifted[k].eval(side, quad.points[q]);
                for (int a = 0; a < dim; ++a)
                    for (int b = 0; b <= a; ++b)
                        N(a, b) += quad.weights[q] * vals[a].dot(vals[b]);
            }
        }
        Eigen::MatrixXd Ge = Eigen::MatrixXd::Zero(dim, dim);
        for (std::size_t q = 0; q < cell.quad_e.size(); ++q)
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b <= a; ++b)
                    if (edge_component(a) == edge_component(b))
                        Ge(a, b) += cell.quad_e.weights[q] *
                                    edge_basis(a, cell.quad_e.points[q]) *
                                    edge_basis(b, cell.quad_e.points[q]);

        const double lam = lambda_max_pencil(N.selfadjointView<Eigen::Lower>(),
                                             Ge.selfadjointView<Eigen::Lower>());
        report.parameters.push_back(t);
        report.ratios.push_back(std::sqrt(std::max(0.0, lam) * kUnitCellDiam));
    }
    report.finalize();
    return report;
}

}  // namespace dgxfem
