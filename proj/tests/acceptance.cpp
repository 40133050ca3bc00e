// Acceptance suite: runs every gate criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Exit code is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fraclim/constants.hpp"
#include "fraclim/energy.hpp"
#include "fraclim/solve.hpp"
#include "fraclim/study.hpp"

using namespace fraclim;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

bool decreasing_last3(const std::vector<double>& v) {
    const size_t n = v.size();
    return n >= 3 && v[n - 1] < v[n - 2] && v[n - 2] < v[n - 3];
}

std::string fmt(double v) { return format_sig12(v); }

SolverConfig sweep_cfg() {
    SolverConfig cfg;
    cfg.tol = 1e-11;
    cfg.max_iter = 60000;
    return cfg;
}

const std::vector<double> kSweepS = {0.6, 0.7, 0.8, 0.9, 0.95};

SweepReport g_sweep1;  // criterion 1's sweep, reused by criteria 4 and 11

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    g_sweep1 = run_sweep(IntervalDomain(0.0, 1.0), 2.0, 1, kSweepS, 1024, {{0.4, 2.0}},
                         sweep_cfg(), {});
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::vector<double> errs;
    bool conv = true;
    for (const auto& row : g_sweep1.rows) {
        errs.push_back(row.rel_err);
        conv = conv && row.converged;
    }
    const bool pass = conv && decreasing_last3(errs) && errs.back() < 0.10 && elapsed < 180.0;
    std::ostringstream os;
    os << "eigenvalue limit p=2 m=1: rel_err last3 " << fmt(errs[2]) << " > " << fmt(errs[3])
       << " > " << fmt(errs[4]) << ", final < 0.10, runtime " << fmt(elapsed) << "s < 180s";
    report(1, pass, os.str());
}

void criterion_2() {
    const auto rep =
        run_sweep(IntervalDomain(0.0, 1.0), 2.0, 2, kSweepS, 1024, {{0.4, 2.0}}, sweep_cfg(), {});
    std::vector<double> errs;
    bool conv = true;
    for (const auto& row : rep.rows) {
        errs.push_back(row.rel_err);
        conv = conv && row.converged;
    }
    const bool pass = conv && decreasing_last3(errs) && errs.back() < 0.15;
    std::ostringstream os;
    os << "eigenvalue limit p=2 m=2 vs 4pi^2: rel_err last3 " << fmt(errs[2]) << " > "
       << fmt(errs[3]) << " > " << fmt(errs[4]) << ", final < 0.15";
    report(2, pass, os.str());
}

void criterion_3() {
    // the local target must be self-converged to 1e-3 under grid halving
    SolverConfig cfg = sweep_cfg();
    const double l512 = local_eigen(Grid1D(IntervalDomain(0.0, 1.0), 512), 3.0, 1, cfg).lambda;
    const double l1024 = local_eigen(Grid1D(IntervalDomain(0.0, 1.0), 1024), 3.0, 1, cfg).lambda;
    const bool self_conv = std::abs(l512 - l1024) / l1024 < 1e-3;
    const auto rep =
        run_sweep(IntervalDomain(0.0, 1.0), 3.0, 1, kSweepS, 1024, {{0.4, 3.0}}, cfg, {});
    std::vector<double> errs;
    bool conv = true;
    for (const auto& row : rep.rows) {
        errs.push_back(row.rel_err);
        conv = conv && row.converged;
    }
    const bool pass = self_conv && conv && decreasing_last3(errs) && errs.back() < 0.15;
    std::ostringstream os;
    os << "eigenvalue limit p=3 m=1: local target self-converged (" << fmt(l1024)
       << "), rel_err last3 " << fmt(errs[2]) << " > " << fmt(errs[3]) << " > " << fmt(errs[4])
       << ", final < 0.15";
    report(3, pass, os.str());
}

void criterion_4() {
    // eigenfunction convergence inside the criterion-1 sweep: sign-aligned L2 and
    // W^{0.4,2} distances to the local mode both decrease over the last three rows
    std::vector<double> lp, wtq;
    bool conv = true;
    for (const auto& row : g_sweep1.rows) {
        lp.push_back(row.lp_dist);
        wtq.push_back(row.wtq_dist.empty() ? 0.0 : row.wtq_dist[0]);
        conv = conv && row.converged;
    }
    const bool pass = conv && decreasing_last3(lp) && decreasing_last3(wtq);
    std::ostringstream os;
    os << "eigenfunction convergence: ||u_s-u||_2 last3 " << fmt(lp[2]) << " > " << fmt(lp[3])
       << " > " << fmt(lp[4]) << "; [u_s-u]_{W^{0.4,2}} " << fmt(wtq[2]) << " > " << fmt(wtq[3])
       << " > " << fmt(wtq[4]);
    report(4, pass, os.str());
}

void criterion_5() {
    const Grid1D grid(IntervalDomain(0.0, 1.0), 1024);
    const auto hat = hat_function(grid);
    bool pass = true;
    std::ostringstream os;
    os << "BBM limit for the hat at s=0.95 within 8% of 2/p:";
    for (double p : {2.0, 3.0}) {
        const auto rep = run_bbm_table(hat, p, {0.8, 0.9, 0.95}, 0.08, {});
        const double final_err = std::abs(rep.cases.back().lhs - 2.0 / p) / (2.0 / p);
        pass = pass && rep.pass;
        os << " p=" << fmt(p) << " err=" << fmt(final_err) << (rep.pass ? " ok" : " FAIL");
    }
    report(5, pass, os.str());
}

void criterion_6() {
    SolverConfig cfg = sweep_cfg();
    std::vector<double> errs, dists;
    for (double s : {0.8, 0.9, 0.95}) {
        auto [scaled, v] = cell_problem(FracParams(s, 2.0), 512, +1, cfg, {});
        errs.push_back(std::abs(scaled - 1.0));
        const auto psi = sample(v.grid, [](double x) { return x; });
        dists.push_back(lp_norm(subtract(v, psi), 2.0));
    }
    const bool pass = decreasing_last3(errs) && decreasing_last3(dists) && errs.back() < 0.08;
    std::ostringstream os;
    os << "cell problem p=2: (1-s)[v_s]^2 errors " << fmt(errs[0]) << " > " << fmt(errs[1])
       << " > " << fmt(errs[2]) << " vs 1, final < 0.08; ||v_s-Psi|| decreasing";
    report(6, pass, os.str());
}

void criterion_7() {
    const Grid1D grid(IntervalDomain(0.0, 1.0), 512);
    const auto F = sample(grid, [](double) { return 1.0; });
    SolverConfig cfg = sweep_cfg();
    cfg.tol = 1e-13;
    const auto rep = check_dual_limit(F, 2.0, {0.8, 0.9, 0.95}, 0.08, cfg, {});
    double final_gap = 0.0;
    for (const auto& c : rep.cases)
        if (c.label.rfind("dual_", 0) == 0)
            final_gap = std::abs(c.lhs - c.rhs) / c.rhs;
    std::ostringstream os;
    os << "dual-norm limit F=1 p=2: final gap " << fmt(final_gap)
       << " < 0.08 with decreasing trend";
    report(7, rep.pass, os.str());
}

void criterion_8() {
    const Grid1D grid(IntervalDomain(0.0, 1.0), 256);
    SolverConfig cfg = sweep_cfg();
    cfg.tol = 1e-12;
    bool pass = true;
    std::ostringstream os;
    os << "oracle equivalence p=2 n=256:";
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double s : {0.3, 0.5, 0.7}) {
        const FracParams fp(s, 2.0);
        const auto modes = dense_eigen_p2(grid, fp, 2, {});
        const auto pg = first_eigen_fractional(grid, fp, cfg, {});
        const double e1 = std::abs(pg.lambda - modes[0].lambda) / modes[0].lambda;
        const auto u2 = second_eigen_fractional(grid, fp, pg, cfg, {});
        const double e2 = std::abs(u2.lambda - modes[1].lambda) / modes[1].lambda;
        pass = pass && e1 < 1e-8 && e2 < 1e-4;
        os << " s=" << fmt(s) << " pg:" << fmt(e1) << " string:" << fmt(e2);

        SeminormScheme scheme(grid, s, 2.0, {});
        dense::Matrix A;
        scheme.assemble_full(A);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> z(grid.n + 2, 0.0);
            for (int i = 1; i <= grid.n; ++i) z[i] = uni(rng);
            const double qf = dense::quadratic_form(A, z);
            const double en = scheme.full_energy(z);
            pass = pass && std::abs(qf - en) <= 1e-8 * std::abs(en);
        }
    }
    os << "; v^T A v vs energy on 10 random v per s at 1e-8";
    report(8, pass, os.str());
}

void criterion_9() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> gauss(0.0, 1.0);
    bool pass = true;
    int done = 0;
    for (int cse = 0; cse < 10; ++cse) {
        const int d = 3 + static_cast<int>(rng() % 4);   // 3..6
        const int m = 1 + static_cast<int>(rng() % 3);   // 1..3
        dense::Matrix b(d), q(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) b(i, j) = gauss(rng);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double acc = (i == j) ? 0.5 : 0.0;
                for (int k = 0; k < d; ++k) acc += b(k, i) * b(k, j);
                q(i, j) = acc;
            }
        const double found = courant_minimax(q, m, 16, 1000 + cse);
        const auto eig = dense::symmetric_eigen(q);
        const bool ok = std::abs(found - eig.values[m - 1]) <= 1e-6 * eig.values[m - 1];
        pass = pass && ok;
        done += ok ? 1 : 0;
    }
    std::ostringstream os;
    os << "Courant minimax on random SPD frames: " << done << "/10 within 1e-6 of the m-th "
       << "eigenvalue";
    report(9, pass, os.str());
}

void criterion_10() {
    bool pass = true;
    std::ostringstream os;
    os << "inequality suites:";
    {
        int held = 0, total = 0;
        for (double s : {0.6, 0.75, 0.9}) {
            const auto rep = check_hardy(FracParams(s, 2.0), 50, 1, 256, {});
            for (const auto& c : rep.cases) {
                ++total;
                held += c.pass ? 1 : 0;
            }
        }
        pass = pass && held == total;
        os << " hardy " << held << "/" << total;
    }
    {
        bool stima = true;
        for (int N : {1, 2})
            for (double p : {1.5, 2.0, 3.0})
                for (double s : {0.6, 0.75, 0.9}) {
                    if (!(s * p > 1.0)) continue;
                    const auto hc = hardy_constants(FracParams(s, p, N));
                    stima = stima && hc.d_sharp >= hc.c_lower;
                }
        pass = pass && stima;
        os << ", stima lattice " << (stima ? "holds" : "VIOLATED");
    }
    {
        bool interp = true;
        const double t = 0.7, q = 2.5, r = 4.0, p = 2.0;
        const double alpha = t * (p / q) * (r - q) / (r - p);
        std::vector<double> maxima;
        for (double frac : {0.25, 0.5, 0.75}) {
            const auto rep =
                check_interpolation(FracParams(frac * alpha, p), t, q, r, 20, 1, 256, {});
            interp = interp && rep.pass;  // includes the 1e-6 dilation-invariance rows
            maxima.push_back(rep.max_ratio);
        }
        const double hi = std::max({maxima[0], maxima[1], maxima[2]});
        const double lo = std::min({maxima[0], maxima[1], maxima[2]});
        interp = interp && lo > 0.0 && hi / lo < 2.0;
        pass = pass && interp;
        os << ", interpolation " << (interp ? "ok" : "FAIL");
    }
    {
        // ratio boundedness per inequality family across the s-sweep
        double lo_a = 1e300, hi_a = 0.0, lo_b = 1e300, hi_b = 0.0;
        bool ok = true;
        for (double s : {0.3, 0.45, 0.6, 0.75, 0.9}) {
            const auto rep = check_poincare(FracParams(s, 2.0), 12, 1, 256, {});
            ok = ok && rep.pass;
            for (const auto& c : rep.cases) {
                if (c.label.rfind("spoinbis", 0) == 0) {
                    lo_b = std::min(lo_b, c.ratio);
                    hi_b = std::max(hi_b, c.ratio);
                } else {
                    lo_a = std::min(lo_a, c.ratio);
                    hi_a = std::max(hi_a, c.ratio);
                }
            }
        }
        ok = ok && hi_a / lo_a < 50.0 && hi_b / lo_b < 50.0;
        pass = pass && ok;
        os << ", poincare spreads " << fmt(hi_a / lo_a) << "," << fmt(hi_b / lo_b) << " < 50";
    }
    {
        SolverConfig cfg;
        const Grid1D grid(IntervalDomain(0.0, 1.0), 256);
        double lo_sup = 1e300, hi_sup = 0.0, lo_sub = 1e300, hi_sub = 0.0;
        for (double s : {0.6, 0.75, 0.9}) {
            const FracParams fp(s, 2.0);
            const auto eig = first_eigen_fractional(grid, fp, cfg, {});
            const auto rep = check_linfty(eig, fp);
            for (const auto& c : rep.cases) {
                lo_sup = std::min(lo_sup, c.ratio);
                hi_sup = std::max(hi_sup, c.ratio);
            }
        }
        for (double s : {0.3, 0.4, 0.45}) {
            const FracParams fp(s, 2.0);
            const auto eig = first_eigen_fractional(grid, fp, cfg, {});
            const auto rep = check_linfty(eig, fp);
            for (const auto& c : rep.cases) {
                lo_sub = std::min(lo_sub, c.ratio);
                hi_sub = std::max(hi_sub, c.ratio);
            }
        }
        const bool ok = hi_sup / lo_sup < 50.0 && hi_sub / lo_sub < 50.0;
        pass = pass && ok;
        os << ", linfty spreads " << fmt(hi_sup / lo_sup) << "," << fmt(hi_sub / lo_sub)
           << " < 50";
    }
    report(10, pass, os.str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void criterion_11() {
    bool pass = true;
    std::ostringstream os;
    {
        const Grid1D grid(IntervalDomain(0.0, 1.0), 256);
        const auto u = random_bump(grid, 3, 0);
        const FracParams fp(0.7, 3.0);
        SeminormConfig ser;
        ser.parallel = false;
        SeminormConfig par;
        par.parallel = true;
        const double e1 = gagliardo_full(u, fp, ser);
        const double e2 = gagliardo_full(u, fp, par);
        const bool ok = std::abs(e1 - e2) <= 1e-12 * std::abs(e1);
        pass = pass && ok;
        os << "determinism/scaling: parallel vs serial rel " << fmt(std::abs(e1 - e2) / e1)
           << " < 1e-12";
    }
    {
        SolverConfig cfg = sweep_cfg();
        const double s = 0.5, p = 2.0;
        const auto r1 =
            first_eigen_fractional(Grid1D(IntervalDomain(0.0, 1.0), 256), FracParams(s, p), cfg, {});
        const auto r2 =
            first_eigen_fractional(Grid1D(IntervalDomain(0.0, 2.0), 256), FracParams(s, p), cfg, {});
        const double expect = std::pow(2.0, -s * p) * r1.lambda;
        const bool ok = std::abs(r2.lambda - expect) / expect < 1e-6;
        pass = pass && ok;
        os << "; lambda scaling rel " << fmt(std::abs(r2.lambda - expect) / expect) << " < 1e-6";
    }
    {
        emit_report(g_sweep1, "acc_sweep_a.csv", ReportFormat::csv);
        emit_report(g_sweep1, "acc_sweep_b.csv", ReportFormat::csv);
        emit_report(g_sweep1, "acc_sweep_a.json", ReportFormat::json);
        emit_report(g_sweep1, "acc_sweep_b.json", ReportFormat::json);
        const bool ok = slurp("acc_sweep_a.csv") == slurp("acc_sweep_b.csv") &&
                        slurp("acc_sweep_a.json") == slurp("acc_sweep_b.json");
        pass = pass && ok;
        os << "; byte-identical re-emission " << (ok ? "ok" : "FAIL");
        std::remove("acc_sweep_a.csv");
        std::remove("acc_sweep_b.csv");
        std::remove("acc_sweep_a.json");
        std::remove("acc_sweep_b.json");
    }
    report(11, pass, os.str());
}

} // namespace

int main() {
    std::printf("fraclim acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::printf("%d/11 criteria passed\n", 11 - failures);
    return failures;
}
