#include "dgxfem/cutcell.hpp"

#include <algorithm>
#include <cmath>

namespace dgxfem {

namespace {

int points_for_degree(int degree) {
    return std::min(20, std::max(1, degree / 2 + 1));
}

// Gauss points along the arc direction get a floor so that the geometric
// (non-polynomial) part of curved integrands is resolved to ~1e-14.
constexpr int kArcPointFloor = 12;

QuadRule full_cell_rule(const CartesianMesh& mesh, int cell_id, int degree) {
    const int m = points_for_degree(degree);
    const QuadRule ref = gauss_square(m);
    const Vec2 o = mesh.cell_origin(cell_id);
    const double half = 0.5 * mesh.h;
    QuadRule rule;
    rule.exactness_degree = ref.exactness_degree;
    rule.points.reserve(ref.size());
    rule.weights.reserve(ref.size());
    for (std::size_t q = 0; q < ref.size(); ++q) {
        rule.points.push_back({o.x + half * (ref.points[q].x + 1.0),
                               o.y + half * (ref.points[q].y + 1.0)});
        rule.weights.push_back(ref.weights[q] * half * half);
    }
    return rule;
}

struct BoundaryEntry {
    Vec2 point;
    int sign;  // -1 / +1 for corners, 0 for interface intersections
};

Vec2 lex_min(const std::vector<Vec2>& pts) {
    Vec2 best = pts.front();
    for (const Vec2& p : pts)
        if (p.x < best.x - 1e-15 || (std::abs(p.x - best.x) <= 1e-15 && p.y < best.y)) best = p;
    return best;
}

}  // namespace

QuadRule curved_subcell_rule(const CutGeometry& geo, int side, int target_degree) {
    const std::vector<Vec2>& chain = (side == 1) ? geo.chain1 : geo.chain2;
    QuadRule rule;
    rule.exactness_degree = target_degree;
    if (chain.size() < 2) return rule;

    // anchor for the fan: centroid of the chord-closed polygon
    Vec2 anchor;
    if (std::abs(polygon_area(chain)) > 1e-14 * geo.cell_measure)
        anchor = polygon_centroid(chain);
    else
        anchor = lex_min(chain);

    // straight triangles over the chain edges
    const QuadRule tri = gauss_triangle(target_degree);
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
        const Vec2 e0 = chain[j] - anchor;
        const Vec2 e1 = chain[j + 1] - anchor;
        const double jac = e0.cross(e1);
        if (std::abs(jac) < 1e-16 * geo.cell_measure) continue;
        for (std::size_t q = 0; q < tri.size(); ++q) {
            rule.points.push_back(anchor + tri.points[q].x * e0 + tri.points[q].y * e1);
            rule.weights.push_back(tri.weights[q] * jac);
        }
    }

    // blended sector under the arc, c(0) = chain.back() -> c(1) = chain.front()
    const ArcParam arc(*geo.ls, chain.back(), chain.front());
    const int mt = points_for_degree(target_degree + 1);
    const int ms = std::max(points_for_degree(target_degree + 1), kArcPointFloor);
    const QuadRule1D gt = gauss_segment(mt);
    const QuadRule1D gs = gauss_segment(ms);
    for (int i = 0; i < ms; ++i) {
        const double s = 0.5 * (gs.points[i] + 1.0);
        const Vec2 c = arc.at(s);
        const Vec2 dc = arc.tangent(s);
        const double radial = (c - anchor).cross(dc);  // > 0 for ccw regions
        for (int j = 0; j < mt; ++j) {
            const double t = 0.5 * (gt.points[j] + 1.0);
            rule.points.push_back(anchor + t * (c - anchor));
            rule.weights.push_back(0.25 * gs.weights[i] * gt.weights[j] * t * radial);
        }
    }

    double measure = rule.weight_sum();
    if (measure < 1e-14 * geo.cell_measure) return QuadRule{{}, {}, {}, target_degree};
    return rule;
}

QuadRule interface_rule(const CutGeometry& geo, int target_degree) {
    QuadRule rule;
    rule.exactness_degree = target_degree;
    const ArcParam arc(*geo.ls, geo.intersections[0], geo.intersections[1]);
    const int m = std::max(points_for_degree(target_degree), kArcPointFloor);
    const QuadRule1D g = gauss_segment(m);
    for (int i = 0; i < m; ++i) {
        const double s = 0.5 * (g.points[i] + 1.0);
        const Vec2 c = arc.at(s);
        rule.points.push_back(c);
        rule.weights.push_back(0.5 * g.weights[i] * arc.tangent(s).norm());
        rule.normals.push_back(geo.ls->grad_phi(c).normalized());
    }
    return rule;
}

CutCell build_cutcell(const CartesianMesh& mesh, const LevelSetInterface& ls, int cell_id,
                      int quad_degree) {
    CutCell cell;
    cell.cell_id = cell_id;
    cell.cls = classify_cell(mesh, ls, cell_id);
    const double cell_measure = mesh.cell_measure();
    const auto corners = mesh.cell_corners(cell_id);

    auto make_pure = [&](CellClass cls) {
        cell.cls = cls;
        cell.interface_arclength = 0.0;
        cell.quad_e = QuadRule{};
        const std::vector<Vec2> full(corners.begin(), corners.end());
        if (cls == CellClass::Pure1) {
            cell.measure1 = cell_measure;
            cell.measure2 = 0.0;
            cell.quad1 = full_cell_rule(mesh, cell_id, quad_degree);
            cell.quad2 = QuadRule{};
            cell.chain1 = full;
            cell.chain2.clear();
        } else {
            cell.measure1 = 0.0;
            cell.measure2 = cell_measure;
            cell.quad1 = QuadRule{};
            cell.quad2 = full_cell_rule(mesh, cell_id, quad_degree);
            cell.chain1.clear();
            cell.chain2 = full;
        }
    };

    if (cell.cls != CellClass::Cut) {
        make_pure(cell.cls);
        return cell;
    }

    // walk the boundary counterclockwise, inserting interface intersections
    std::vector<BoundaryEntry> loop;
    for (int e = 0; e < 4; ++e) {
        const Vec2 a = corners[e];
        const Vec2 b = corners[(e + 1) % 4];
        const int sa = levelset_sign(ls.phi(a));
        const int sb = levelset_sign(ls.phi(b));
        loop.push_back({a, sa});
        if (sa == sb) continue;
        const auto hit = edge_intersection(ls, a, b);
        if (!hit) continue;
        const Vec2 p = *hit;
        if ((p - a).norm() < 1e-12) {
            loop.back().sign = 0;  // root snapped onto the leading corner
        } else if ((p - b).norm() < 1e-12) {
            // the trailing corner becomes the intersection; handled when pushed
            // on the next edge, so record it by marking b later via a sentinel
            loop.push_back({p, 0});
            // swallow the duplicate corner on the next iteration
            const int nxt = (e + 1) % 4;
            (void)nxt;
        } else {
            loop.push_back({p, 0});
        }
    }
    // merge duplicates (an intersection coinciding with the next corner)
    std::vector<BoundaryEntry> merged;
    for (const auto& ent : loop) {
        if (!merged.empty() && (ent.point - merged.back().point).norm() < 1e-12) {
            if (ent.sign == 0) merged.back().sign = 0;
            continue;
        }
        merged.push_back(ent);
    }
    if (merged.size() > 1 && (merged.front().point - merged.back().point).norm() < 1e-12) {
        if (merged.back().sign == 0) merged.front().sign = 0;
        merged.pop_back();
    }

    std::vector<std::size_t> cut_idx;
    for (std::size_t i = 0; i < merged.size(); ++i)
        if (merged[i].sign == 0) cut_idx.push_back(i);

    if (cut_idx.size() < 2) {
        // either a tangential graze (interface touches the boundary in one
        // point) or a component closed inside the cell; the latter cannot be
        // meshed by a single chord and is an under-resolution error
        const Vec2 o = mesh.cell_origin(cell_id);
        int neg = 0, pos = 0;
        for (int j = 1; j < 5; ++j)
            for (int i = 1; i < 5; ++i)
                (levelset_sign(ls.phi({o.x + mesh.h * i / 5.0, o.y + mesh.h * j / 5.0})) < 0 ? neg
                                                                                             : pos)++;
        if (neg > 0 && pos > 0)
            throw AmbiguousCut("build_cutcell: cell " + std::to_string(cell_id) +
                               " contains an interface component with no boundary chord");
        make_pure(neg > pos ? CellClass::Pure1 : CellClass::Pure2);
        return cell;
    }
    if (cut_idx.size() > 2)
        throw AmbiguousCut("build_cutcell: cell " + std::to_string(cell_id) +
                           " has more than 2 interface intersections");

    // split the loop into the two chains; each chain runs ccw from one
    // intersection to the other and is closed by the interface arc
    auto chain_between = [&](std::size_t from, std::size_t to) {
        std::vector<Vec2> chain;
        for (std::size_t i = from; ; i = (i + 1) % merged.size()) {
            chain.push_back(merged[i].point);
            if (i == to) break;
        }
        return chain;
    };
    auto chain_sign = [&](const std::vector<Vec2>& chain, std::size_t from, std::size_t to) {
        int sgn = 0;
        for (std::size_t i = (from + 1) % merged.size(); i != to; i = (i + 1) % merged.size()) {
            if (merged[i].sign != 0) {
                if (sgn != 0 && sgn != merged[i].sign)
                    throw AmbiguousCut("build_cutcell: inconsistent corner signs in cell " +
                                       std::to_string(cell_id));
                sgn = merged[i].sign;
            }
        }
        if (sgn == 0) {
            // cornerless chain: sample between the chord and the arc
            const ArcParam arc(ls, chain.back(), chain.front());
            const Vec2 probe = 0.5 * (arc.at(0.5) + 0.5 * (chain.front() + chain.back()));
            sgn = levelset_sign(ls.phi(probe));
        }
        return sgn;
    };

    const std::size_t ia = cut_idx[0], ib = cut_idx[1];
    std::vector<Vec2> chainA = chain_between(ia, ib);
    std::vector<Vec2> chainB = chain_between(ib, ia);
    const int sA = chain_sign(chainA, ia, ib);
    const int sB = chain_sign(chainB, ib, ia);
    if (sA == sB)
        throw AmbiguousCut("build_cutcell: both chains sample the same side in cell " +
                           std::to_string(cell_id));

    CutGeometry geo;
    geo.ls = &ls;
    geo.intersections = {merged[ia].point, merged[ib].point};
    geo.chain1 = (sA < 0) ? chainA : chainB;
    geo.chain2 = (sA < 0) ? chainB : chainA;
    geo.cell_measure = cell_measure;

    cell.edge_intersections = geo.intersections;
    cell.chain1 = geo.chain1;
    cell.chain2 = geo.chain2;
    cell.quad1 = curved_subcell_rule(geo, 1, quad_degree);
    cell.quad2 = curved_subcell_rule(geo, 2, quad_degree);
    cell.measure1 = cell.quad1.weight_sum();
    cell.measure2 = cell.quad2.weight_sum();

    // a vanishing sub-element means the interface runs along the boundary;
    // the cell is then effectively uncut
    if (cell.measure1 < 1e-14 * cell_measure) {
        make_pure(CellClass::Pure2);
        return cell;
    }
    if (cell.measure2 < 1e-14 * cell_measure) {
        make_pure(CellClass::Pure1);
        return cell;
    }

    cell.quad_e = interface_rule(geo, quad_degree);
    cell.interface_arclength = cell.quad_e.weight_sum();
    return cell;
}

std::vector<CutCell> build_all_cutcells(const CartesianMesh& mesh, const LevelSetInterface& ls,
                                        int quad_degree) {
    std::vector<CutCell> cells;
    cells.reserve(mesh.num_cells());
    for (int id = 0; id < mesh.num_cells(); ++id)
        cells.push_back(build_cutcell(mesh, ls, id, quad_degree));
    return cells;
}

}  // namespace dgxfem
