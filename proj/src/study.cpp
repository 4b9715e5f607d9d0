#include "dgxfem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dgxfem {

namespace {

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

ProblemData make_custom_problem(double alpha1, double alpha2) {
    // harmonic inside, bubble outside; zero on the outer boundary
    ProblemData p = make_zero_problem(alpha1, alpha2);
    p.has_exact = true;
    p.u1 = [alpha1](Vec2 x) { return (1.0 + x.x + x.y + x.x * x.y) / alpha1; };
    p.grad_u1 = [alpha1](Vec2 x) {
        return Vec2{(1.0 + x.y) / alpha1, (1.0 + x.x) / alpha1};
    };
    p.u2 = [alpha2](Vec2 x) { return x.x * (1.0 - x.x) * x.y * (1.0 - x.y) / alpha2; };
    p.grad_u2 = [alpha2](Vec2 x) {
        return Vec2{(1.0 - 2.0 * x.x) * x.y * (1.0 - x.y) / alpha2,
                    x.x * (1.0 - x.x) * (1.0 - 2.0 * x.y) / alpha2};
    };
    p.f1 = [](Vec2) { return 0.0; };
    p.f2 = [](Vec2 x) { return 2.0 * (x.y * (1.0 - x.y) + x.x * (1.0 - x.x)); };
    const Vec2 center{0.5, 0.5};
    p.g_neumann = [center, alpha1, alpha2, gu1 = p.grad_u1, gu2 = p.grad_u2](Vec2 x) {
        const Vec2 n1 = (x - center).normalized();
        return (alpha1 * gu1(x) - alpha2 * gu2(x)).dot(n1);
    };
    p.g_dirichlet_jump = [u1 = p.u1, u2 = p.u2](Vec2 x) { return u1(x) - u2(x); };
    return p;
}

std::string fmt(double v, const char* spec = "%.12e") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "scheme") {
        cfg.scheme = value;
        if (value == "sipg") cfg.beta = 1.0;
        if (value == "nipg") cfg.beta = -1.0;
    } else if (key == "p") {
        cfg.degrees = parse_int_list(value);
    } else if (key == "n") {
        cfg.mesh_sizes = parse_int_list(value);
    } else if (key == "alpha1") {
        cfg.alpha1 = std::stod(value);
    } else if (key == "alpha2") {
        cfg.alpha2 = std::stod(value);
    } else if (key == "eta_beta" || key == "eta-beta") {
        cfg.eta_beta = std::stod(value);
    } else if (key == "eta1") {
        cfg.eta1 = std::stod(value);
    } else if (key == "eta") {
        cfg.eta = std::stod(value);
    } else if (key == "beta") {
        cfg.beta = std::stod(value);
    } else if (key == "c0") {
        cfg.c0 = std::stod(value);
    } else if (key == "case") {
        cfg.problem_case = value;
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "tol") {
        cfg.solver_tol = std::stod(value);
    } else if (key == "seed") {
        cfg.seed = std::stoul(value);
    } else if (key == "dump_vtk" || key == "dump-vtk") {
        cfg.dump_vtk = (value == "1" || value == "true" || value == "on");
    } else {
        throw Error("unknown config key: " + key);
    }
}

RunConfig load_config_file(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) apply_config_entry(cfg, key, value);
    }
    return cfg;
}

StudyRow run_single(const RunConfig& cfg, int p, int n) {
    StudyRow row;
    row.scheme = cfg.scheme;
    row.p = p;
    row.n = n;
    row.h = 1.0 / n;

    const CartesianMesh mesh(n);
    const LevelSetInterface ls = make_reference_circle();
    const std::vector<CutCell> cuts = build_all_cutcells(mesh, ls, 2 * p + 2);
    const XfeSpace space(mesh, cuts, p);
    row.ndof = space.ndof();

    const double c0 = cfg.c0 > 0.0 ? cfg.c0 : 0.5 * ls.curvature_bound;
    const auto kappa = make_kappa_weights(cuts, c0, mesh.h_diam());
    const ProblemData problem = (cfg.problem_case == "custom")
                                    ? make_custom_problem(cfg.alpha1, cfg.alpha2)
                                    : make_reference_problem(cfg.alpha1, cfg.alpha2);

    SchemeParams params;
    params.beta = cfg.beta;
    params.eta_beta =
        cfg.eta_beta > 0.0 ? cfg.eta_beta : default_eta_beta(p, cfg.alpha1, cfg.alpha2);
    params.eta1 = cfg.eta1;
    params.eta = cfg.eta;

    SparseSystem sys;
    const bool lifting = (cfg.scheme == "lifting");
    if (lifting) {
        params.scheme = Scheme::Lifting;
        sys = assemble_lifting(space, cuts, kappa, problem, params);
    } else {
        params.scheme = Scheme::IP;
        sys = assemble_ip(space, cuts, kappa, problem, params);
    }

    std::vector<double> u_h;
    const int maxit = 40 * sys.size();
    try {
        if (cfg.scheme == "nipg") {
            auto [x, rep] = solve_general(sys, std::max(cfg.solver_tol, 1e-11), maxit);
            u_h = std::move(x);
            row.iterations = rep.iterations;
        } else {
            auto [x, rep] = solve_spd(sys, cfg.solver_tol, maxit);
            u_h = std::move(x);
            row.iterations = rep.iterations;
        }
    } catch (const NoConvergence& e) {
        row.status = "noconv";
        row.err_l2 = row.err_h1 = row.err_jump = row.err_lift =
            std::numeric_limits<double>::quiet_NaN();
        return row;
    }

    row.err_l2 = l2_error(u_h, problem, space, cuts);
    row.err_h1 = broken_h1_error(u_h, problem, space, cuts);
    row.err_jump = jump_error(u_h, problem, space, cuts, lifting ? params.eta1 : params.eta_beta);
    row.err_lift = lifting ? lifting_error(u_h, problem, space, cuts, kappa, params.eta) : 0.0;

    if (cfg.dump_vtk) {
        std::filesystem::create_directories(cfg.out_dir);
        write_vtk(cfg.out_dir + "/field_" + cfg.scheme + "_p" + std::to_string(p) + "_n" +
                      std::to_string(n) + ".vtk",
                  space, cuts, u_h);
    }
    return row;
}

StudyResult run_study(const RunConfig& cfg) {
    StudyResult result;
    for (const int p : cfg.degrees) {
        double prev_l2 = 0.0, prev_h1 = 0.0;
        bool have_prev = false;
        for (const int n : cfg.mesh_sizes) {
            StudyRow row = run_single(cfg, p, n);
            const bool ok = (row.status == "ok");
            if (ok && have_prev) {
                row.rate_l2 = std::log2(prev_l2 / row.err_l2);
                row.rate_h1 = std::log2(prev_h1 / row.err_h1);
            } else {
                row.rate_l2 = std::numeric_limits<double>::quiet_NaN();
                row.rate_h1 = std::numeric_limits<double>::quiet_NaN();
            }
            if (ok) {
                prev_l2 = row.err_l2;
                prev_h1 = row.err_h1;
                have_prev = true;
            } else {
                have_prev = false;
                result.all_ok = false;
            }
            result.rows.push_back(std::move(row));
        }
    }

    std::filesystem::create_directories(cfg.out_dir);
    write_study_csv(cfg.out_dir + "/study.csv", result.rows);

    const struct {
        const char* name;
        double StudyRow::*field;
    } norms[] = {{"L2", &StudyRow::err_l2}, {"H1", &StudyRow::err_h1},
                 {"jump", &StudyRow::err_jump}};
    for (const auto& nm : norms) {
        std::vector<PlotSeries> series;
        for (const int p : cfg.degrees) {
            PlotSeries s;
            s.label = "p=" + std::to_string(p);
            s.ref_slope_lo = p;
            s.ref_slope_hi = p + 1;
            for (const StudyRow& row : result.rows)
                if (row.p == p && row.status == "ok") {
                    s.x.push_back(1.0 / row.h);
                    s.y.push_back(row.*(nm.field));
                }
            if (!s.x.empty()) series.push_back(std::move(s));
        }
        write_loglog_svg(cfg.out_dir + "/study_" + nm.name + ".svg",
                         std::string(nm.name) + " error vs 1/h (" + cfg.scheme + ")", series);
    }
    return result;
}

void run_lab(const RunConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    const int p = cfg.degrees.empty() ? 2 : cfg.degrees.front();
    const double threshold = 0.02;  // kappa cutoff c0*h_K used on the unit cell

    std::vector<double> lambdas;
    for (int k = 1; k <= 19; ++k) lambdas.push_back(k / 20.0);
    SweepReport nrm;
    for (const double lam : lambdas) {
        nrm.parameters.push_back(lam);
        nrm.ratios.push_back(norm_equiv_1d(p, lam));
    }
    nrm.finalize();
    write_sweep_csv(cfg.out_dir + "/lab_norm_equiv.csv", nrm);

    std::vector<double> offsets;
    for (int k = 0; k < 60; ++k)
        offsets.push_back(std::pow(10.0, -6.0 + (6.0 + std::log10(0.5)) * k / 59.0));
    offsets.back() = 0.5;

    write_sweep_csv(cfg.out_dir + "/lab_kappa_trace.csv",
                    kappa_trace_sweep(p, offsets, threshold, true));
    write_sweep_csv(cfg.out_dir + "/lab_kappa_trace_disabled.csv",
                    kappa_trace_sweep(p, offsets, threshold, false));
    write_sweep_csv(cfg.out_dir + "/lab_trace_ineq.csv", trace_ineq_check(p, offsets));
    write_sweep_csv(cfg.out_dir + "/lab_lifting_bound.csv",
                    lifting_bound_check(p, offsets, threshold));

    const ConvexSweepReport convex = convex_inverse_sweep(p, 500, cfg.seed);
    write_sweep_csv(cfg.out_dir + "/lab_convex_gradient.csv", convex.gradient);
    write_sweep_csv(cfg.out_dir + "/lab_convex_trace.csv", convex.trace);
}

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows) {
    std::ofstream out(path);
    out << "scheme,p,n,h,ndof,err_L2,err_H1,err_jump,rate_L2,rate_H1,err_lift,status\n";
    for (const StudyRow& r : rows) {
        out << r.scheme << "," << r.p << "," << r.n << "," << fmt(r.h, "%.10e") << "," << r.ndof
            << "," << fmt(r.err_l2) << "," << fmt(r.err_h1) << "," << fmt(r.err_jump) << ","
            << fmt(r.rate_l2, "%.6f") << "," << fmt(r.rate_h1, "%.6f") << "," << fmt(r.err_lift)
            << "," << r.status << "\n";
    }
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
    std::ofstream out(path);
    out << "parameter,ratio\n";
    for (std::size_t i = 0; i < report.parameters.size(); ++i)
        out << fmt(report.parameters[i], "%.10e") << "," << fmt(report.ratios[i]) << "\n";
    out << "# max," << fmt(report.max_ratio) << " at " << fmt(report.max_location, "%.10e")
        << "\n";
}

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const PlotSeries& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.y[i] <= 0.0) continue;
            xmin = std::min(xmin, std::log10(s.x[i]));
            xmax = std::max(xmax, std::log10(s.x[i]));
            ymin = std::min(ymin, std::log10(s.y[i]));
            ymax = std::max(ymax, std::log10(s.y[i]));
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
        ymin = -1;
        ymax = 0;
    }
    xmin -= 0.05;
    xmax += 0.05;
    ymin -= 0.4;
    ymax += 0.4;
    auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double ly) { return H - mb - (ly - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ofstream out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << title << "</text>\n";

    // axes and integer log ticks
    out << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
        << H - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
        << "\" stroke=\"black\"/>\n";
    for (int t = static_cast<int>(std::ceil(xmin)); t <= std::floor(xmax); ++t) {
        out << "<line x1=\"" << fmt(px(t), "%.2f") << "\" y1=\"" << H - mb << "\" x2=\""
            << fmt(px(t), "%.2f") << "\" y2=\"" << H - mb + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px(t), "%.2f") << "\" y=\"" << H - mb + 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << t << "</text>\n";
    }
    for (int t = static_cast<int>(std::ceil(ymin)); t <= std::floor(ymax); ++t) {
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(py(t), "%.2f") << "\" x2=\"" << ml
            << "\" y2=\"" << fmt(py(t), "%.2f") << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(py(t) + 4, "%.2f")
            << "\" text-anchor=\"end\" font-size=\"12\">" << t << "</text>\n";
    }
    out << "<text x=\"" << (W + ml - mr) / 2 << "\" y=\"" << H - 12
        << "\" text-anchor=\"middle\" font-size=\"13\">log10(1/h)</text>\n";
    out << "<text x=\"16\" y=\"" << (H + mt - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << (H + mt - mb) / 2 << ")\">log10(error)</text>\n";

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
    int idx = 0;
    for (const PlotSeries& s : series) {
        const char* color = colors[idx % 5];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.y[i] <= 0.0) continue;
            out << fmt(px(std::log10(s.x[i])), "%.2f") << "," << fmt(py(std::log10(s.y[i])), "%.2f")
                << " ";
        }
        out << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (s.y[i] <= 0.0) continue;
            out << "<circle cx=\"" << fmt(px(std::log10(s.x[i])), "%.2f") << "\" cy=\""
                << fmt(py(std::log10(s.y[i])), "%.2f") << "\" r=\"3\" fill=\"" << color
                << "\"/>\n";
        }
        // dashed reference slopes anchored at the last point
        if (!s.x.empty() && s.y.back() > 0.0) {
            const double lx1 = std::log10(s.x.back());
            const double ly1 = std::log10(s.y.back());
            const double span = 0.9;
            for (const int slope : {s.ref_slope_lo, s.ref_slope_hi}) {
                if (slope <= 0) continue;
                out << "<line x1=\"" << fmt(px(lx1 - span), "%.2f") << "\" y1=\""
                    << fmt(py(ly1 + slope * span), "%.2f") << "\" x2=\"" << fmt(px(lx1), "%.2f")
                    << "\" y2=\"" << fmt(py(ly1), "%.2f") << "\" stroke=\"" << color
                    << "\" stroke-dasharray=\"6 4\" stroke-width=\"1\"/>\n";
            }
        }
        out << "<text x=\"" << W - mr - 8 << "\" y=\"" << mt + 18 + 16 * idx
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.label
            << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

void write_vtk(const std::string& path, const XfeSpace& space, const std::vector<CutCell>& cuts,
               const std::vector<double>& coeff) {
    std::vector<Vec2> points;
    std::vector<std::array<int, 3>> tris;
    std::vector<double> values;

    auto add_fan = [&](int cell_id, int side, const std::vector<Vec2>& chain) {
        if (chain.size() < 3) return;
        const Vec2 anchor = polygon_centroid(chain);
        const int a0 = static_cast<int>(points.size());
        points.push_back(anchor);
        values.push_back(eval_uh(space, coeff, cell_id, side, anchor));
        for (const Vec2& v : chain) {
            points.push_back(v);
            values.push_back(eval_uh(space, coeff, cell_id, side, v));
        }
        const int k = static_cast<int>(chain.size());
        for (int j = 0; j < k; ++j)
            tris.push_back({a0, a0 + 1 + j, a0 + 1 + (j + 1) % k});
    };

    for (int id = 0; id < space.mesh().num_cells(); ++id)
        for (int side = 1; side <= 2; ++side)
            if (!cuts[id].quad(side).empty()) add_fan(id, side, cuts[id].chain(side));

    std::ofstream out(path);
    out << "# vtk DataFile Version 3.0\ndiscrete solution per sub-element\nASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << points.size() << " double\n";
    for (const Vec2& pt : points) out << fmt(pt.x, "%.10e") << " " << fmt(pt.y, "%.10e") << " 0\n";
    out << "CELLS " << tris.size() << " " << 4 * tris.size() << "\n";
    for (const auto& t : tris) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "CELL_TYPES " << tris.size() << "\n";
    for (std::size_t i = 0; i < tris.size(); ++i) out << "5\n";
    out << "POINT_DATA " << points.size() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
    for (const double v : values) out << fmt(v, "%.10e") << "\n";
}

}  // namespace dgxfem
