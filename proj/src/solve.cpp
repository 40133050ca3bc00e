#include "fraclim/solve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "fraclim/quadrature.hpp"

namespace fraclim {

namespace {

// ---- energy models over padded nodal arrays (size n+2, boundary entries pinned) ----

class EnergyModel {
public:
    virtual ~EnergyModel() = default;
    virtual double energy(std::span<const double> z) const = 0;
    /// Fills g (zeroing it first) and returns the energy.
    virtual double energy_grad(std::span<const double> z, std::span<double> g) const = 0;
};

class FractionalEnergy : public EnergyModel {
public:
    FractionalEnergy(const Grid1D& grid, double s, double p, const SeminormConfig& scfg,
                     bool with_tail)
        : scheme_(grid, s, p, scfg), with_tail_(with_tail) {
        if (p == 2.0) {
            matrix_ = std::make_unique<dense::Matrix>();
            if (with_tail)
                scheme_.assemble_full(*matrix_);
            else
                scheme_.assemble_interior(*matrix_);
        }
    }

    double energy(std::span<const double> z) const override {
        if (matrix_) return dense::quadratic_form(*matrix_, z);
        return with_tail_ ? scheme_.full_energy(z) : scheme_.interior_energy(z);
    }

    double energy_grad(std::span<const double> z, std::span<double> g) const override {
        if (matrix_) {
            const auto av = dense::matvec(*matrix_, z);
            double e = 0.0;
            for (size_t i = 0; i < z.size(); ++i) {
                e += z[i] * av[i];
                g[i] = 2.0 * av[i];
            }
            return e;
        }
        std::fill(g.begin(), g.end(), 0.0);
        if (with_tail_) {
            scheme_.add_full_gradient(z, g);
            return scheme_.full_energy(z);
        }
        scheme_.add_interior_gradient(z, g);
        return scheme_.interior_energy(z);
    }

    const SeminormScheme& scheme() const { return scheme_; }

private:
    SeminormScheme scheme_;
    std::unique_ptr<dense::Matrix> matrix_;
    bool with_tail_;
};

class LocalEnergy : public EnergyModel {
public:
    LocalEnergy(double h, double p) : h_(h), p_(p) {}

    double energy(std::span<const double> z) const override {
        double acc = 0.0;
        for (size_t k = 0; k + 1 < z.size(); ++k)
            acc += h_ * std::pow(std::abs((z[k + 1] - z[k]) / h_), p_);
        return acc;
    }

    double energy_grad(std::span<const double> z, std::span<double> g) const override {
        std::fill(g.begin(), g.end(), 0.0);
        double acc = 0.0;
        for (size_t k = 0; k + 1 < z.size(); ++k) {
            const double m = (z[k + 1] - z[k]) / h_;
            acc += h_ * std::pow(std::abs(m), p_);
            const double gm = p_ * std::pow(std::abs(m), p_ - 1.0) * (m > 0 ? 1.0 : (m < 0 ? -1.0 : 0.0));
            g[k] -= gm;
            g[k + 1] += gm;
        }
        return acc;
    }

private:
    double h_, p_;
};

// gradient of N(z) = int |u|^p dx (padded layout), cell-wise Gauss
void lp_pow_gradient(std::span<const double> z, double h, double p, std::span<double> g) {
    std::fill(g.begin(), g.end(), 0.0);
    const auto& gr = quad::gauss01(8);
    for (size_t k = 0; k + 1 < z.size(); ++k) {
        double g0 = 0.0, g1 = 0.0;
        for (size_t i = 0; i < gr.x.size(); ++i) {
            const double t = gr.x[i];
            const double v = z[k] * (1.0 - t) + z[k + 1] * t;
            const double fv =
                p * std::pow(std::abs(v), p - 1.0) * (v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0));
            g0 += h * gr.w[i] * fv * (1.0 - t);
            g1 += h * gr.w[i] * fv * t;
        }
        g[k] += g0;
        g[k + 1] += g1;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// H^1-metric preconditioner: solve (1/h) tridiag(-1,2,-1) d = r on the interior entries.
class H1Preconditioner {
public:
    H1Preconditioner(int n, double h) : t_{}, n_(n) {
        t_.diag.assign(n, 2.0 / h);
        t_.off.assign(n > 0 ? n - 1 : 0, -1.0 / h);
    }
    void apply(std::span<const double> r_interior, std::span<double> d_interior) const {
        const auto x = dense::tridiag_solve(t_, r_interior);
        std::copy(x.begin(), x.end(), d_interior.begin());
    }

private:
    dense::TriDiag t_;
    int n_;
};

struct SphereMinResult {
    std::vector<double> z;
    double energy;
    int iterations;
    double residual;
};

// Projected gradient descent on the Lp unit sphere: descent along the (optionally
// H^1-preconditioned) Rayleigh gradient, Armijo backtracking on the energy of the
// renormalized trial, renormalization every step. The Rayleigh quotient is
// non-increasing by construction.
SphereMinResult sphere_minimize(const EnergyModel& model, const Grid1D& grid, double p,
                                std::vector<double> z, const SolverConfig& cfg, bool use_pre,
                                const char* who) {
    cfg.validate();
    const double h = grid.h;
    const int n = grid.n;
    const size_t nz = z.size();
    z[0] = z[nz - 1] = 0.0;
    {
        const double nrm = lp_norm_padded(z, h, p);
        if (!(nrm > 0.0)) throw InvalidInputError(std::string(who) + ": zero initial state");
        for (auto& v : z) v /= nrm;
    }
    H1Preconditioner pre(n, h);
    std::vector<double> g(nz), gN(nz), r(n), d(n), zn(nz), gn(nz);
    std::vector<double> prev_zi, prev_r;
    double E = 0.0, relchg = 1.0;
    E = model.energy_grad(z, g);
    double alpha = -1.0;
    int consecutive_small = 0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        lp_pow_gradient(z, h, p, gN);
        for (int i = 0; i < n; ++i) r[i] = g[i + 1] - E * gN[i + 1];
        if (use_pre)
            pre.apply(r, d);
        else
            std::copy(r.begin(), r.end(), d.begin());
        for (auto& v : d) v = -v;
        const double slope = dot(r, d);  // negative for a descent direction
        if (!(slope < 0.0)) break;       // numerical stationarity

        if (alpha <= 0.0) {
            double dmax = 0.0;
            for (double v : d) dmax = std::max(dmax, std::abs(v));
            alpha = dmax > 0 ? 0.1 / dmax : 1.0;
        } else if (!prev_zi.empty()) {
            double ss = 0.0, sy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dz = z[i + 1] - prev_zi[i];
                ss += dz * dz;
                sy += dz * (r[i] - prev_r[i]);
            }
            if (sy > 0.0 && ss > 0.0) alpha = ss / sy;
        }
        prev_zi.assign(z.begin() + 1, z.end() - 1);
        prev_r = r;

        double a = alpha;
        bool accepted = false;
        double En = E;
        for (int bt = 0; bt < 60; ++bt) {
            for (size_t i = 0; i < nz; ++i) zn[i] = z[i];
            for (int i = 0; i < n; ++i) zn[i + 1] += a * d[i];
            const double nrm = lp_norm_padded(zn, h, p);
            if (nrm > 0.0) {
                for (auto& v : zn) v /= nrm;
                En = model.energy_grad(zn, gn);
                if (En <= E + cfg.bt_decrease * a * slope) {
                    accepted = true;
                    break;
                }
            }
            a *= cfg.bt_shrink;
        }
        if (!accepted) {
            // cannot decrease further: numerical optimum
            return {std::move(z), E, it, relchg};
        }
        relchg = std::abs(E - En) / std::max(std::abs(E), 1e-300);
        z.swap(zn);
        g.swap(gn);
        E = En;
        if (relchg < cfg.tol) {
            if (++consecutive_small >= 2) return {std::move(z), E, it, relchg};
        } else {
            consecutive_small = 0;
        }
    }
    throw ConvergenceError(std::string(who) + ": no convergence within max_iter", E,
                           cfg.max_iter, relchg);
}

DiscreteFunction from_padded(const Grid1D& grid, std::span<const double> z) {
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = z[i + 1];
    return DiscreteFunction(grid, std::move(v));
}

EigenResult first_mode(const EnergyModel& model, const Grid1D& grid, double p,
                       const SolverConfig& cfg, bool use_pre,
                       const std::optional<DiscreteFunction>& init, const char* who) {
    if (init.has_value() && !init->grid.same_geometry(grid))
        throw InvalidInputError(std::string(who) + ": init grid mismatch");
    std::vector<double> z0 =
        init.has_value() ? init->padded() : hat_function(grid).padded();
    auto res = sphere_minimize(model, grid, p, std::move(z0), cfg, use_pre, who);
    EigenResult out{res.energy, from_padded(grid, res.z), res.iterations, res.residual, 1};
    out.eigenfunction = normalize_lp(out.eigenfunction, p);
    return out;
}

// ---- string method ----

struct StringResult {
    double lambda;
    std::vector<double> peak_state;
    int sweeps;
    double residual;
};

StringResult string_method(const EnergyModel& model, const Grid1D& grid, double p,
                           std::span<const double> u1, const SolverConfig& cfg, bool use_pre,
                           const char* who) {
    cfg.validate();
    const double h = grid.h;
    const int n = grid.n;
    const size_t nz = static_cast<size_t>(n) + 2;
    const int P = cfg.path_points;

    // initial path: great-circle-like arc from u1 to -u1 through a transverse state
    std::vector<std::vector<double>> path(P, std::vector<double>(nz, 0.0));
    std::vector<double> w(nz, 0.0);
    const IntervalDomain& dom = grid.domain;
    for (int i = 1; i <= n; ++i) {
        const double x = grid.node(i);
        w[i] = std::sin(2.0 * M_PI * (x - dom.a) / dom.diam());
    }
    {  // remove the u1 component, in the plain Euclidean metric
        const double c = dot(w, u1) / dot(u1, u1);
        for (size_t i = 0; i < nz; ++i) w[i] -= c * u1[i];
        const double nrm = lp_norm_padded(w, h, p);
        if (!(nrm > 0.0)) throw InvalidInputError(std::string(who) + ": degenerate transverse seed");
        for (auto& v : w) v /= nrm;
    }
    for (int j = 0; j < P; ++j) {
        const double th = M_PI * j / (P - 1);
        for (size_t i = 0; i < nz; ++i) path[j][i] = std::cos(th) * u1[i] + std::sin(th) * w[i];
        const double nrm = lp_norm_padded(path[j], h, p);
        for (auto& v : path[j]) v /= nrm;
    }

    H1Preconditioner pre(n, h);
    std::vector<double> g(nz), gN(nz), r(n), d(n), tau(n), trial(nz), E(P, 0.0);
    for (int j = 0; j < P; ++j) E[j] = model.energy(path[j]);
    std::vector<double> alpha(P, -1.0);

    double emax_prev = 0.0;
    double relchg = 1.0;
    int stable = 0;
    int sweep = 0;
    const int string_sweeps = std::min(cfg.max_iter, 60);
    for (sweep = 1; sweep <= string_sweeps; ++sweep) {
        // relax interior states along the component of the descent direction
        // perpendicular to the path tangent (keeps the relaxation from fighting
        // the reparametrization)
        for (int j = 1; j + 1 < P; ++j) {
            const double Ej = model.energy_grad(path[j], g);
            E[j] = Ej;
            lp_pow_gradient(path[j], h, p, gN);
            for (int i = 0; i < n; ++i) r[i] = g[i + 1] - Ej * gN[i + 1];
            if (use_pre)
                pre.apply(r, d);
            else
                std::copy(r.begin(), r.end(), d.begin());
            for (auto& v : d) v = -v;
            double tnorm = 0.0;
            for (int i = 0; i < n; ++i) {
                tau[i] = path[j + 1][i + 1] - path[j - 1][i + 1];
                tnorm += tau[i] * tau[i];
            }
            if (tnorm > 0.0) {
                tnorm = std::sqrt(tnorm);
                double proj = 0.0;
                for (int i = 0; i < n; ++i) proj += d[i] * tau[i] / tnorm;
                for (int i = 0; i < n; ++i) d[i] -= proj * tau[i] / tnorm;
            }
            const double slope = dot(r, d);
            if (!(slope < 0.0)) continue;
            if (alpha[j] <= 0.0) {
                double dmax = 0.0;
                for (double v : d) dmax = std::max(dmax, std::abs(v));
                alpha[j] = dmax > 0 ? 0.05 / dmax : 1.0;
            }
            double a = alpha[j];
            for (int bt = 0; bt < 40; ++bt) {
                trial = path[j];
                for (int i = 0; i < n; ++i) trial[i + 1] += a * d[i];
                const double nrm = lp_norm_padded(trial, h, p);
                if (nrm > 0.0) {
                    for (auto& v : trial) v /= nrm;
                    const double En = model.energy(trial);
                    if (En <= E[j] + cfg.bt_decrease * a * slope) {
                        path[j].swap(trial);
                        E[j] = En;
                        alpha[j] = std::min(a * 1.7, 1e6);
                        break;
                    }
                }
                a *= cfg.bt_shrink;
                alpha[j] = a;
            }
        }

        // arclength reparametrization along the polyline, then back to the sphere
        std::vector<double> cum(P, 0.0);
        for (int j = 1; j < P; ++j) {
            double seg = 0.0;
            for (size_t i = 0; i < nz; ++i) {
                const double dv = path[j][i] - path[j - 1][i];
                seg += dv * dv;
            }
            seg = std::sqrt(seg);
            if (seg < 1e-12)
                throw DegeneratePathError(std::string(who) + ": adjacent path states collapsed");
            cum[j] = cum[j - 1] + seg;
        }
        std::vector<std::vector<double>> rp(P, std::vector<double>(nz, 0.0));
        rp[0] = path[0];
        rp[P - 1] = path[P - 1];
        int seg = 1;
        for (int j = 1; j + 1 < P; ++j) {
            const double target = cum[P - 1] * j / (P - 1);
            while (seg < P - 1 && cum[seg] < target) ++seg;
            const double t = (target - cum[seg - 1]) / (cum[seg] - cum[seg - 1]);
            for (size_t i = 0; i < nz; ++i)
                rp[j][i] = (1.0 - t) * path[seg - 1][i] + t * path[seg][i];
            const double nrm = lp_norm_padded(rp[j], h, p);
            for (auto& v : rp[j]) v /= nrm;
        }
        path.swap(rp);
        for (int j = 1; j + 1 < P; ++j) E[j] = model.energy(path[j]);

        const double emax = *std::max_element(E.begin(), E.end());
        relchg = std::abs(emax - emax_prev) / std::max(emax, 1e-300);
        emax_prev = emax;
        if (sweep > 3 && relchg < 1e-5) {
            if (++stable >= 3) break;
        } else {
            stable = 0;
        }
        if (sweep >= string_sweeps) break;
    }

    // climbing refinement: the peak state ascends along the path tangent and
    // relaxes transversally until it sits on the critical point at the pass level
    int jm = 0;
    for (int j = 1; j < P; ++j)
        if (E[j] > E[jm]) jm = j;
    if (jm == 0 || jm == P - 1) jm = P / 2;

    std::vector<double> z = path[jm];
    std::vector<double> tauhat(n, 0.0);
    // tangent estimate: the unstable direction at the pass points along the path
    // toward u1; refreshed from the iterate so the climb converges to r = 0 exactly
    auto refresh_tangent = [&](std::span<const double> zz) {
        double zz2 = 0.0, uz = 0.0;
        for (int i = 0; i < n; ++i) {
            zz2 += zz[i + 1] * zz[i + 1];
            uz += u1[i + 1] * zz[i + 1];
        }
        double tn = 0.0;
        for (int i = 0; i < n; ++i) {
            tauhat[i] = u1[i + 1] - (uz / zz2) * zz[i + 1];
            tn += tauhat[i] * tauhat[i];
        }
        if (tn > 1e-20) {
            tn = std::sqrt(tn);
            for (auto& v : tauhat) v /= tn;
            return true;
        }
        return false;
    };
    {
        double tn = 0.0;
        for (int i = 0; i < n; ++i) {
            tauhat[i] = path[jm + 1][i + 1] - path[jm - 1][i + 1];
            tn += tauhat[i] * tauhat[i];
        }
        tn = std::sqrt(tn);
        if (!(tn > 0.0)) throw DegeneratePathError(std::string(who) + ": flat path at the peak");
        for (auto& v : tauhat) v /= tn;
    }
    auto residual_of = [&](std::span<const double> zz, std::span<double> gg,
                           std::span<double> rr) {
        const double Ez = model.energy_grad(zz, gg);
        lp_pow_gradient(zz, h, p, gN);
        for (int i = 0; i < n; ++i) rr[i] = gg[i + 1] - Ez * gN[i + 1];
        return Ez;
    };
    std::vector<double> rc(n), dc(n), zn(nz), gtrial(nz), rtrial(n);
    double E0 = residual_of(z, g, rc);
    double rnorm = std::sqrt(dot(rc, rc));
    double alpha_c = -1.0;
    int stable_c = 0;
    int climb_it = 0;
    for (climb_it = 1; climb_it <= cfg.max_iter; ++climb_it) {
        refresh_tangent(z);
        if (use_pre)
            pre.apply(rc, dc);
        else
            std::copy(rc.begin(), rc.end(), dc.begin());
        double along = 0.0;
        for (int i = 0; i < n; ++i) along += dc[i] * tauhat[i];
        for (int i = 0; i < n; ++i) dc[i] = -(dc[i] - 2.0 * along * tauhat[i]);
        if (alpha_c <= 0.0) {
            double dmax = 0.0;
            for (double v : dc) dmax = std::max(dmax, std::abs(v));
            alpha_c = dmax > 0 ? 0.02 / dmax : 1.0;
        }
        double a = alpha_c;
        bool accepted = false;
        for (int bt = 0; bt < 50; ++bt) {
            zn = z;
            for (int i = 0; i < n; ++i) zn[i + 1] += a * dc[i];
            const double nrm = lp_norm_padded(zn, h, p);
            if (nrm > 0.0) {
                for (auto& v : zn) v /= nrm;
                const double En = residual_of(zn, gtrial, rtrial);
                const double rn = std::sqrt(dot(rtrial, rtrial));
                if (rn < rnorm) {
                    const double rel = std::abs(En - E0) / std::max(En, 1e-300);
                    z.swap(zn);
                    rc = rtrial;
                    E0 = En;
                    rnorm = rn;
                    alpha_c = std::min(a * 1.5, 1e8);
                    accepted = true;
                    relchg = rel;
                    break;
                }
            }
            a *= cfg.bt_shrink;
        }
        if (!accepted) break;  // residual cannot be reduced further
        if (relchg < cfg.tol) {
            if (++stable_c >= 3) break;
        } else {
            stable_c = 0;
        }
        if (climb_it == cfg.max_iter)
            throw ConvergenceError(std::string(who) + ": saddle refinement did not converge", E0,
                                   sweep + climb_it, relchg);
    }
    return {E0, std::move(z), sweep + climb_it, relchg};
}

// unconstrained convex descent (dual norms, cell problem for p != 2)
struct DescentResult {
    std::vector<double> z;
    double value;
    int iterations;
    double residual;
};

DescentResult descend(const std::function<double(std::span<const double>, std::span<double>)>& fg,
                      int n, double h, std::vector<double> z, const SolverConfig& cfg,
                      bool use_pre, const char* who) {
    // minimizes a smooth convex objective over the interior entries of z
    const size_t nz = z.size();
    H1Preconditioner pre(n, h);
    std::vector<double> g(nz), gn(nz), r(n), d(n), zn(nz);
    std::vector<double> prev_zi, prev_r;
    double J = fg(z, g);
    double alpha = -1.0, relchg = 1.0;
    int consecutive_small = 0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        for (int i = 0; i < n; ++i) r[i] = g[i + 1];
        if (use_pre)
            pre.apply(r, d);
        else
            std::copy(r.begin(), r.end(), d.begin());
        for (auto& v : d) v = -v;
        const double slope = dot(r, d);
        if (!(slope < 0.0)) return {std::move(z), J, it, relchg};
        if (alpha <= 0.0) {
            double dmax = 0.0;
            for (double v : d) dmax = std::max(dmax, std::abs(v));
            alpha = dmax > 0 ? 0.1 / dmax : 1.0;
        } else if (!prev_zi.empty()) {
            double ss = 0.0, sy = 0.0;
            for (int i = 0; i < n; ++i) {
                const double dz = z[i + 1] - prev_zi[i];
                ss += dz * dz;
                sy += dz * (r[i] - prev_r[i]);
            }
            if (sy > 0.0 && ss > 0.0) alpha = ss / sy;
        }
        prev_zi.assign(z.begin() + 1, z.end() - 1);
        prev_r = r;

        double a = alpha;
        bool accepted = false;
        double Jn = J;
        for (int bt = 0; bt < 60; ++bt) {
            zn = z;
            for (int i = 0; i < n; ++i) zn[i + 1] += a * d[i];
            Jn = fg(zn, gn);
            if (Jn <= J + cfg.bt_decrease * a * slope) {
                accepted = true;
                break;
            }
            a *= cfg.bt_shrink;
        }
        if (!accepted) return {std::move(z), J, it, relchg};
        relchg = std::abs(J - Jn) / std::max(std::abs(J), 1e-300);
        z.swap(zn);
        g.swap(gn);
        J = Jn;
        if (relchg < cfg.tol) {
            if (++consecutive_small >= 2) return {std::move(z), J, it, relchg};
        } else {
            consecutive_small = 0;
        }
    }
    throw ConvergenceError(std::string(who) + ": no convergence within max_iter", J, cfg.max_iter,
                           relchg);
}

// Gramian application F -> (M F) in the padded layout (zero boundary rows kept zero).
std::vector<double> gramian_apply(std::span<const double> f, double h) {
    const size_t nz = f.size();
    std::vector<double> out(nz, 0.0);
    for (size_t k = 0; k + 1 < nz; ++k) {
        out[k] += h / 6.0 * (2.0 * f[k] + f[k + 1]);
        out[k + 1] += h / 6.0 * (f[k] + 2.0 * f[k + 1]);
    }
    out[0] = 0.0;
    out[nz - 1] = 0.0;
    return out;
}

double dual_value_from_min(double minimum, double p) {
    const double pc = p / (p - 1.0);
    const double inner = -pc * minimum;
    if (inner <= 0.0) return 0.0;
    return std::pow(p, 1.0 / p) * std::pow(inner, 1.0 / pc);
}

} // namespace

EigenResult first_eigen_fractional(const Grid1D& grid, const FracParams& fp,
                                   const SolverConfig& cfg, const SeminormConfig& scfg,
                                   const std::optional<DiscreteFunction>& init) {
    if (fp.dim != 1) throw InvalidInputError("first_eigen_fractional: dim must be 1");
    FractionalEnergy model(grid, fp.s, fp.p, scfg, /*with_tail=*/true);
    const bool use_pre = cfg.precondition && fp.sp() >= 1.0;
    return first_mode(model, grid, fp.p, cfg, use_pre, init, "first_eigen_fractional");
}

EigenResult second_eigen_fractional(const Grid1D& grid, const FracParams& fp,
                                    const EigenResult& u1, const SolverConfig& cfg,
                                    const SeminormConfig& scfg) {
    if (fp.dim != 1) throw InvalidInputError("second_eigen_fractional: dim must be 1");
    if (!u1.eigenfunction.grid.same_geometry(grid))
        throw InvalidInputError("second_eigen_fractional: u1 grid mismatch");
    FractionalEnergy model(grid, fp.s, fp.p, scfg, /*with_tail=*/true);
    const bool use_pre = cfg.precondition && fp.sp() >= 1.0;
    auto res = string_method(model, grid, fp.p, u1.eigenfunction.padded(), cfg, use_pre,
                             "second_eigen_fractional");
    EigenResult out{res.lambda, from_padded(grid, res.peak_state), res.sweeps, res.residual, 2};
    out.eigenfunction = normalize_lp(out.eigenfunction, fp.p);
    return out;
}

std::vector<EigenResult> dense_eigen_p2(const Grid1D& grid, const FracParams& fp, int m_max,
                                        const SeminormConfig& scfg) {
    if (fp.p != 2.0) throw InvalidInputError("dense_eigen_p2: requires p = 2");
    if (m_max < 1 || m_max > grid.n) throw InvalidInputError("dense_eigen_p2: require 1 <= m_max <= n");
    SeminormScheme scheme(grid, fp.s, fp.p, scfg);
    dense::Matrix full;
    scheme.assemble_full(full);
    const int n = grid.n;
    dense::Matrix A(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = full(i + 1, j + 1);
    if (dense::max_asymmetry(A) > 1e-12)
        throw InvalidInputError("dense_eigen_p2: assembled matrix not symmetric to 1e-12");
    const auto M = dense::mass_tridiag(n, grid.h);
    auto eig = dense::generalized_eigen(A, M);
    std::vector<EigenResult> out;
    out.reserve(m_max);
    for (int m = 0; m < m_max; ++m) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, m);
        // deterministic sign: first substantial node positive
        double ref = 0.0;
        for (int i = 0; i < n; ++i)
            if (std::abs(v[i]) > 1e-10) {
                ref = v[i];
                break;
            }
        if (ref < 0.0)
            for (auto& x : v) x = -x;
        EigenResult r{eig.values[m], DiscreteFunction(grid, std::move(v)), 0, 0.0, m + 1};
        out.push_back(std::move(r));
    }
    return out;
}

EigenResult local_eigen(const Grid1D& grid, double p, int m, const SolverConfig& cfg) {
    if (!(p > 1.0)) throw InvalidInputError("local_eigen: require p > 1");
    if (m != 1 && m != 2) throw InvalidInputError("local_eigen: m must be 1 or 2");
    LocalEnergy model(grid.h, p);
    EigenResult u1 = first_mode(model, grid, p, cfg, cfg.precondition, std::nullopt, "local_eigen");
    if (m == 1) return u1;
    auto res = string_method(model, grid, p, u1.eigenfunction.padded(), cfg, cfg.precondition,
                             "local_eigen");
    EigenResult out{res.lambda, from_padded(grid, res.peak_state), res.sweeps, res.residual, 2};
    out.eigenfunction = normalize_lp(out.eigenfunction, p);
    return out;
}

std::pair<double, DiscreteFunction> cell_problem(const FracParams& fp, int n, int a_sign,
                                                 const SolverConfig& cfg,
                                                 const SeminormConfig& scfg) {
    fp.require_sp_above(1.0, "cell_problem");
    if (a_sign != 1 && a_sign != -1) throw InvalidInputError("cell_problem: a_sign must be +-1");
    const Grid1D grid(IntervalDomain(-0.5, 0.5), n);
    const double a = static_cast<double>(a_sign);
    SeminormScheme scheme(grid, fp.s, fp.p, scfg);

    // nodal array of Psi_a with the boundary pinned to +-a/2
    std::vector<double> z(n + 2, 0.0);
    for (int i = 0; i <= n + 1; ++i) z[i] = a * grid.node(i);

    if (fp.p == 2.0) {
        dense::Matrix full;
        scheme.assemble_interior(full);
        // A_II w = -(A_I0 z_0 + A_I,n+1 z_{n+1})
        dense::Matrix AII(n);
        std::vector<double> rhs(n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) AII(i, j) = full(i + 1, j + 1);
            rhs[i] = -(full(i + 1, 0) * z[0] + full(i + 1, n + 1) * z[n + 1]);
        }
        const auto w = dense::cholesky_solve(AII, rhs);
        for (int i = 0; i < n; ++i) z[i + 1] = w[i];
    } else {
        SolverConfig dcfg = cfg;
        auto fg = [&](std::span<const double> zz, std::span<double> g) {
            std::fill(g.begin(), g.end(), 0.0);
            scheme.add_interior_gradient(zz, g);
            return scheme.interior_energy(zz);
        };
        auto res = descend(fg, n, grid.h, z, dcfg, dcfg.precondition, "cell_problem");
        z = std::move(res.z);
    }
    const double energy = scheme.interior_energy(z);
    std::vector<double> interior(n);
    for (int i = 0; i < n; ++i) interior[i] = z[i + 1];
    return {(1.0 - fp.s) * energy, DiscreteFunction(grid, std::move(interior))};
}

double dual_norm_fractional(const DiscreteFunction& F, const FracParams& fp,
                            const SolverConfig& cfg, const SeminormConfig& scfg) {
    const Grid1D& grid = F.grid;
    FractionalEnergy model(grid, fp.s, fp.p, scfg, /*with_tail=*/true);
    const auto rhs = gramian_apply(F.padded(), grid.h);
    double rmax = 0.0;
    for (double v : rhs) rmax = std::max(rmax, std::abs(v));
    if (rmax == 0.0) return 0.0;
    const double one_minus_s = 1.0 - fp.s;
    auto fg = [&](std::span<const double> z, std::span<double> g) {
        const double e = model.energy_grad(z, g);
        double J = one_minus_s * e;
        for (size_t i = 0; i < z.size(); ++i) {
            g[i] = one_minus_s * g[i] - rhs[i];
            J -= rhs[i] * z[i];
        }
        return J;
    };
    std::vector<double> z0(grid.n + 2, 0.0);
    auto res = descend(fg, grid.n, grid.h, std::move(z0), cfg,
                       cfg.precondition && fp.sp() >= 1.0, "dual_norm_fractional");
    return dual_value_from_min(res.value, fp.p);
}

double dual_norm_local(const DiscreteFunction& F, double p, const SolverConfig& cfg) {
    if (!(p > 1.0)) throw InvalidInputError("dual_norm_local: require p > 1");
    const Grid1D& grid = F.grid;
    LocalEnergy model(grid.h, p);
    const auto rhs = gramian_apply(F.padded(), grid.h);
    double rmax = 0.0;
    for (double v : rhs) rmax = std::max(rmax, std::abs(v));
    if (rmax == 0.0) return 0.0;
    auto fg = [&](std::span<const double> z, std::span<double> g) {
        const double e = model.energy_grad(z, g);
        double J = e;
        for (size_t i = 0; i < z.size(); ++i) {
            g[i] -= rhs[i];
            J -= rhs[i] * z[i];
        }
        return J;
    };
    std::vector<double> z0(grid.n + 2, 0.0);
    auto res = descend(fg, grid.n, grid.h, std::move(z0), cfg, cfg.precondition,
                       "dual_norm_local");
    return dual_value_from_min(res.value, p);
}

double courant_minimax(const dense::Matrix& Q, int m, int trials, unsigned long seed) {
    const int d = Q.n;
    if (d < 1 || d > 8) throw InvalidInputError("courant_minimax: require 1 <= d <= 8");
    if (m < 1 || m > d) throw InvalidInputError("courant_minimax: require 1 <= m <= d");
    if (dense::max_asymmetry(Q) > 1e-12)
        throw InvalidInputError("courant_minimax: Q not symmetric to 1e-12");
    {
        const auto probe = dense::symmetric_eigen(Q);
        if (!(probe.values.front() > 0.0))
            throw InvalidInputError("courant_minimax: Q not positive definite");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto orthonormalize = [&](std::vector<double>& f) {
        // columns f[:, j], j = 0..m-1, Gram-Schmidt
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < j; ++k) {
                double pr = 0.0;
                for (int i = 0; i < d; ++i) pr += f[i * m + j] * f[i * m + k];
                for (int i = 0; i < d; ++i) f[i * m + j] -= pr * f[i * m + k];
            }
            double nrm = 0.0;
            for (int i = 0; i < d; ++i) nrm += f[i * m + j] * f[i * m + j];
            nrm = std::sqrt(nrm);
            if (nrm < 1e-14) {
                for (int i = 0; i < d; ++i) f[i * m + j] = gauss(rng);
                --j;
                continue;
            }
            for (int i = 0; i < d; ++i) f[i * m + j] /= nrm;
        }
    };

    auto objective = [&](const std::vector<double>& f, std::vector<double>* top_dir) {
        // lambda_max of F^T Q F; optionally returns v = F y (unit) for the gradient
        dense::Matrix proj(m);
        std::vector<double> qf(static_cast<size_t>(d) * m, 0.0);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < m; ++j) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k) acc += Q(i, k) * f[k * m + j];
                qf[i * m + j] = acc;
            }
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                double acc = 0.0;
                for (int i = 0; i < d; ++i) acc += f[i * m + a] * qf[i * m + b];
                proj(a, b) = acc;
            }
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b < m; ++b) {
                const double v = 0.5 * (proj(a, b) + proj(b, a));
                proj(a, b) = proj(b, a) = v;
            }
        auto eig = dense::symmetric_eigen(proj);
        if (top_dir) {
            top_dir->assign(d, 0.0);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < m; ++j)
                    (*top_dir)[i] += f[i * m + j] * eig.vectors(j, m - 1);
        }
        return eig.values[m - 1];
    };

    double best = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < std::max(1, trials); ++trial) {
        std::vector<double> f(static_cast<size_t>(d) * m);
        for (auto& v : f) v = gauss(rng);
        orthonormalize(f);
        std::vector<double> v;
        double val = objective(f, &v);
        double alpha = 0.2;
        for (int it = 0; it < 500; ++it) {
            // gradient of the largest Rayleigh value: 2 Q v y^T in frame coordinates
            std::vector<double> qv(d, 0.0);
            for (int i = 0; i < d; ++i) {
                double acc = 0.0;
                for (int k = 0; k < d; ++k) acc += Q(i, k) * v[k];
                qv[i] = acc;
            }
            // y is recovered as F^T v (v = F y)
            std::vector<double> y(m, 0.0);
            for (int j = 0; j < m; ++j)
                for (int i = 0; i < d; ++i) y[j] += f[i * m + j] * v[i];
            bool improved = false;
            double a = alpha;
            for (int bt = 0; bt < 30; ++bt) {
                std::vector<double> fn = f;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < m; ++j) fn[i * m + j] -= a * 2.0 * qv[i] * y[j];
                orthonormalize(fn);
                std::vector<double> vn;
                const double valn = objective(fn, &vn);
                if (valn < val - 1e-15 * std::abs(val)) {
                    f.swap(fn);
                    v.swap(vn);
                    const double rel = (val - valn) / std::max(val, 1e-300);
                    val = valn;
                    alpha = a * 1.5;
                    improved = true;
                    if (rel < 1e-13) it = 500;
                    break;
                }
                a *= 0.5;
            }
            if (!improved) break;
        }
        best = std::min(best, val);
    }
    return best;
}

} // namespace fraclim
