#include "dgxfem/geometry.hpp"

#include <cmath>

namespace dgxfem {

LevelSetInterface make_circle_interface(Vec2 center, double radius) {
    LevelSetInterface ls;
    ls.phi = [center, radius](Vec2 p) {
        const double dx = p.x - center.x, dy = p.y - center.y;
        return dx * dx + dy * dy - radius * radius;
    };
    ls.grad_phi = [center](Vec2 p) { return Vec2{2.0 * (p.x - center.x), 2.0 * (p.y - center.y)}; };
    ls.curvature_bound = 1.0 / radius;
    return ls;
}

LevelSetInterface make_line_interface(Vec2 point, Vec2 normal) {
    const Vec2 n = normal.normalized();
    LevelSetInterface ls;
    ls.phi = [point, n](Vec2 p) { return (p - point).dot(n); };
    ls.grad_phi = [n](Vec2) { return n; };
    ls.curvature_bound = 0.0;
    return ls;
}

LevelSetInterface make_constant_levelset(double value) {
    LevelSetInterface ls;
    ls.phi = [value](Vec2) { return value; };
    ls.grad_phi = [](Vec2) { return Vec2{0.0, 0.0}; };
    ls.curvature_bound = 0.0;
    return ls;
}

LevelSetInterface make_reference_circle() {
    return make_circle_interface({0.5, 0.5}, std::sqrt(0.125));
}

CellClass classify_cell(const CartesianMesh& mesh, const LevelSetInterface& ls, int cell_id) {
    const auto corners = mesh.cell_corners(cell_id);
    int corner_sign[4];
    bool any_neg = false, any_pos = false;
    for (int c = 0; c < 4; ++c) {
        corner_sign[c] = levelset_sign(ls.phi(corners[c]));
        (corner_sign[c] < 0 ? any_neg : any_pos) = true;
    }

    // count sign flips along each edge at 9 samples; a doubly-crossed edge
    // means the mesh does not resolve the interface
    int total_flips = 0;
    for (int e = 0; e < 4; ++e) {
        const Vec2 a = corners[e], b = corners[(e + 1) % 4];
        int flips = 0;
        int prev = corner_sign[e];
        for (int k = 1; k <= 8; ++k) {
            const double t = k / 8.0;
            const int s = (k == 8) ? corner_sign[(e + 1) % 4]
                                   : levelset_sign(ls.phi(a + t * (b - a)));
            if (s != prev) ++flips;
            prev = s;
        }
        if (flips > 1)
            throw AmbiguousCut("classify_cell: edge of cell " + std::to_string(cell_id) +
                               " crossed more than once; refine the mesh");
        total_flips += flips;
    }
    if (total_flips > 2)
        throw AmbiguousCut("classify_cell: cell " + std::to_string(cell_id) +
                           " has more than 2 edge intersections; refine the mesh");
    if (total_flips > 0) return CellClass::Cut;

    // no edge crossing: interior samples catch a component contained in the cell
    const Vec2 o = mesh.cell_origin(cell_id);
    for (int j = 1; j < 5; ++j)
        for (int i = 1; i < 5; ++i) {
            const int s = levelset_sign(ls.phi({o.x + mesh.h * i / 5.0, o.y + mesh.h * j / 5.0}));
            (s < 0 ? any_neg : any_pos) = true;
        }
    if (any_neg && any_pos) return CellClass::Cut;
    return any_neg ? CellClass::Pure1 : CellClass::Pure2;
}

std::optional<Vec2> edge_intersection(const LevelSetInterface& ls, Vec2 p0, Vec2 p1) {
    const double f0 = ls.phi(p0);
    const double f1 = ls.phi(p1);
    if (std::abs(f0) < 1e-13) return p0;
    if (std::abs(f1) < 1e-13) return p1;
    if (f0 * f1 > 0.0) return std::nullopt;

    const Vec2 d = p1 - p0;
    double lo = 0.0, hi = 1.0;
    double flo = f0;
    double t = 0.5;
    for (int it = 0; it < 200; ++it) {
        const Vec2 x = p0 + t * d;
        const double f = ls.phi(x);
        if (std::abs(f) < 1e-13) return x;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = t;
            flo = f;
        } else {
            hi = t;
        }
        // Newton step along the segment, kept inside the bracket
        const double slope = ls.grad_phi(x).dot(d);
        double tn = (slope != 0.0) ? t - f / slope : -1.0;
        t = (tn > lo && tn < hi) ? tn : 0.5 * (lo + hi);
    }
    throw Error("edge_intersection: no convergence after 200 steps");
}

ArcParam::ArcParam(const LevelSetInterface& ls, Vec2 p0, Vec2 p1)
    : ls_(&ls), p0_(p0), chord_(p1 - p0) {
    nu_ = chord_.perp().normalized();
    // sagitta bound from the curvature, with generous headroom for bracketing
    const double c = chord_.norm();
    bracket_ = std::max(1e-12, 4.0 * (ls.curvature_bound * c * c / 8.0) + 1e-9);
}

double ArcParam::offset(double s) const {
    const Vec2 q = p0_ + s * chord_;
    double f0 = ls_->phi(q);
    if (std::abs(f0) < 1e-15) return 0.0;

    // bracket the root of xi -> phi(q + xi nu) around zero
    double b = 0.0, fb = f0;
    double step = bracket_;
    for (int k = 0; k < 60; ++k) {
        b = (f0 > 0.0) ? -step : step;  // phi grows along +nu iff grad.nu > 0; probe both
        fb = ls_->phi(q + b * nu_);
        if (f0 * fb <= 0.0) break;
        b = -b;
        fb = ls_->phi(q + b * nu_);
        if (f0 * fb <= 0.0) break;
        step *= 2.0;
        b = 0.0;
    }
    if (b == 0.0) throw Error("ArcParam: failed to bracket the interface offset");

    double lo = std::min(0.0, b), hi = std::max(0.0, b);
    double flo = (lo == 0.0) ? f0 : fb;
    double xi = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = ls_->phi(q + xi * nu_);
        if (std::abs(f) < 1e-14) return xi;
        if ((f < 0.0) == (flo < 0.0)) {
            lo = xi;
            flo = f;
        } else {
            hi = xi;
        }
        const double slope = ls_->grad_phi(q + xi * nu_).dot(nu_);
        const double xn = (slope != 0.0) ? xi - f / slope : lo - 1.0;
        xi = (xn > lo && xn < hi) ? xn : 0.5 * (lo + hi);
    }
    throw Error("ArcParam: interface offset root-find did not converge");
}

Vec2 ArcParam::at(double s) const { return p0_ + s * chord_ + offset(s) * nu_; }

Vec2 ArcParam::tangent(double s) const {
    const Vec2 c = at(s);
    const Vec2 g = ls_->grad_phi(c);
    const double denom = g.dot(nu_);
    const double dxi = -g.dot(chord_) / denom;
    return chord_ + dxi * nu_;
}

}  // namespace dgxfem
