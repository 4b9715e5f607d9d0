#pragma once

#include <string>
#include <vector>

#include "dgxfem/analysis.hpp"
#include "dgxfem/lab.hpp"

namespace dgxfem {

struct RunConfig {
    std::string scheme = "sipg";  // sipg | nipg | lifting
    std::vector<int> degrees = {1};
    std::vector<int> mesh_sizes = {4, 8, 16, 32};
    double alpha1 = 10.0;
    double alpha2 = 1.0;
    double eta_beta = -1.0;  // < 0: use the default penalty scale
    double eta1 = 1.0;
    double eta = 2.0;
    double beta = 1.0;  // +1 sipg, -1 nipg; kept in sync with `scheme`
    double c0 = -1.0;   // < 0: 2*gamma0*gamma1 from the interface curvature
    std::string problem_case = "paper";  // paper | custom
    std::string out_dir = "out";
    // tighter than the solver default: at p = 3 the cut-cell conditioning
    // turns residual slack directly into broken-H1 pollution
    double solver_tol = 3e-13;
    unsigned long seed = 42;
    bool dump_vtk = false;
};

// flat key=value file; '#' starts a comment
RunConfig load_config_file(const std::string& path);
// single "key=value" override (same keys as the config file)
void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value);

struct StudyRow {
    std::string scheme;
    int p = 0;
    int n = 0;
    double h = 0.0;
    int ndof = 0;
    double err_l2 = 0.0, err_h1 = 0.0, err_jump = 0.0, err_lift = 0.0;
    double rate_l2 = 0.0, rate_h1 = 0.0;  // NaN where undefined
    int iterations = 0;
    std::string status = "ok";
};

struct StudyResult {
    std::vector<StudyRow> rows;
    bool all_ok = true;
};

// one assemble/solve/measure pass of the configured case
StudyRow run_single(const RunConfig& cfg, int p, int n);

// the full refinement sweep; writes study.csv and one SVG per norm under
// cfg.out_dir (created if missing)
StudyResult run_study(const RunConfig& cfg);

// all five inequality sweeps; writes one CSV per sweep under cfg.out_dir
void run_lab(const RunConfig& cfg);

void write_study_csv(const std::string& path, const std::vector<StudyRow>& rows);
void write_sweep_csv(const std::string& path, const SweepReport& report);

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;  // raw values; plotted on log10/log10 axes
    int ref_slope_lo = 0, ref_slope_hi = 0;  // dashed reference slopes
};
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<PlotSeries>& series);

void write_vtk(const std::string& path, const XfeSpace& space, const std::vector<CutCell>& cuts,
               const std::vector<double>& coeff);

}  // namespace dgxfem
