#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fraclim/solve.hpp"

namespace fraclim {

inline constexpr const char* kArtifactVersion = "fraclim 0.1.0";

struct SweepRow {
    double s = 0.0;
    double lambda = 0.0;         ///< raw lambda^s
    double scaled_lambda = 0.0;  ///< (1-s) * lambda^s
    double target = 0.0;         ///< K(p,N) * lambda^1_{m,p}
    double rel_err = 0.0;
    double lp_dist = 0.0;        ///< sign-aligned ||u_s - u||_{L^p}
    std::vector<double> wtq_dist;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

struct SweepMeta {
    double a = 0.0, b = 1.0;
    double p = 2.0;
    double s = 0.0;   ///< set for single-solve emissions; sweeps carry s per row
    int m = 1;
    int n = 0;
    double kconst_value = 0.0;
    double lambda_local = 0.0;
    std::vector<std::pair<double, double>> tq_pairs;
    unsigned long seed = 0;
    std::string config;          ///< resolved solver/seminorm configuration
};

struct SweepReport {
    SweepMeta meta;
    std::vector<SweepRow> rows;
};

struct CheckCase {
    std::string label;
    std::map<std::string, double> inputs;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

struct CheckReport {
    std::string suite;
    std::map<std::string, double> params;
    std::vector<CheckCase> cases;
    double max_ratio = 0.0;
    double min_ratio = 0.0;
    double spread = 0.0;   ///< max_ratio / min_ratio over the finite positive ratios
    bool pass = false;
};

/// Seeded smooth test functions: sums of 3-6 Gaussian bumps sampled at the
/// interior nodes (so they vanish at the endpoints by construction).
DiscreteFunction random_bump(const Grid1D& grid, unsigned long seed, int index);

/// Singular-limit sweep for the m-th eigenvalue: fills one row per s with the scaled
/// eigenvalue, the local target, and the sign-aligned eigenfunction distances.
/// Solver failures mark the row as not converged instead of aborting the sweep.
SweepReport run_sweep(const IntervalDomain& dom, double p, int m,
                      const std::vector<double>& s_list, int n,
                      const std::vector<std::pair<double, double>>& tq_pairs,
                      const SolverConfig& cfg = {}, const SeminormConfig& scfg = {});

/// (1-s)[u]^p against K(p,1)*|grad u|_p^p across s_list; pass when the last entry is
/// within `tolerance` and the error decreases over the last three entries.
CheckReport run_bbm_table(const DiscreteFunction& u, double p, const std::vector<double>& s_list,
                          double tolerance = 0.08, const SeminormConfig& scfg = {});

/// Interpolation inequality: ratio of the s^{1/q}-seminorm to the constant-free
/// right-hand side; records the max ratio per s and checks dilation invariance.
/// r = infinity is encoded as r <= 0.
CheckReport check_interpolation(const FracParams& fp, double t, double q, double r,
                                int samples, unsigned long seed, int n = 256,
                                const SeminormConfig& scfg = {});

/// Poincare ratios for the full-space and interior (convex, sp > 1) inequalities.
CheckReport check_poincare(const FracParams& fp, int samples, unsigned long seed,
                           int n = 256, const SeminormConfig& scfg = {});

/// Hardy inequality with the sharp constant: D * int |u|^p / delta^{sp} <= (1-s)[u]^p_Omega
/// within a 1e-3 discretization slack, per sample. Requires sp > 1.
CheckReport check_hardy(const FracParams& fp, int samples, unsigned long seed,
                        int n = 256, const SeminormConfig& scfg = {});

/// int_Omega |u|^p / delta_Omega^{sp} dx with the endpoint singularity handled in
/// closed form on the boundary cells.
double hardy_weighted_integral(const DiscreteFunction& u, const FracParams& fp);

/// ||u||_p^p / (diam^{sp} (1-s) [u]^p_R) — the constant of the full-space Poincare
/// inequality realized by u.
double poincare_ratio(const DiscreteFunction& u, const FracParams& fp,
                      const SeminormConfig& scfg = {});

/// ||u||_p^p (sp-1)^p / (diam^{sp} (1-s) [u]^p_Omega); requires sp > 1.
double poincare_bis_ratio(const DiscreteFunction& u, const FracParams& fp,
                          const SeminormConfig& scfg = {});

/// L^inf / Holder ratios of one converged eigenfunction (sp != 1 in dimension 1).
CheckReport check_linfty(const EigenResult& eig, const FracParams& fp);

/// Dual-norm convergence: (1-s)^{-1/p} ||F||_{-s,p'} against K^{-1/p} ||F||_{-1,p'},
/// with the rearranged comparison bound recorded at each s.
CheckReport check_dual_limit(const DiscreteFunction& F, double p,
                             const std::vector<double>& s_list,
                             double tolerance = 0.08,
                             const SolverConfig& cfg = {}, const SeminormConfig& scfg = {});

enum class ReportFormat { csv, json };

void emit_report(const SweepReport& report, const std::string& path, ReportFormat format);
void emit_report(const CheckReport& report, const std::string& path, ReportFormat format);
void emit_report(const EigenResult& eig, const SweepMeta& meta, const std::string& path,
                 ReportFormat format);

SweepReport load_sweep_json(const std::string& path);
CheckReport load_check_json(const std::string& path);

/// 12-significant-digit float formatting used by the CSV writers.
std::string format_sig12(double v);

} // namespace fraclim
