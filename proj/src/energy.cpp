#include "fraclim/energy.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "fraclim/dense.hpp"
#include "fraclim/quadrature.hpp"

namespace fraclim {

double tail_density(double x, const IntervalDomain& dom, const FracParams& fp) {
    if (!dom.contains(x)) throw InvalidInputError("tail_density: x outside the open interval");
    const double sp = fp.sp();
    return (std::pow(x - dom.a, -sp) + std::pow(dom.b - x, -sp)) / sp;
}

namespace detail {

int thread_budget(bool parallel) {
    if (!parallel) return 1;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("FRACLIM_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

} // namespace detail

namespace {

enum class PKind { two, three, four, general };

PKind classify(double p) {
    if (p == 2.0) return PKind::two;
    if (p == 3.0) return PKind::three;
    if (p == 4.0) return PKind::four;
    return PKind::general;
}

struct SepRule {
    int dim = 0;
    std::vector<double> t;  // nodes in [0,1], shared by both axes
    std::vector<double> w;  // dim*dim, kernel and the unordered-pair factor 2 folded in
};

int nsub_for_offset(int d) {
    if (d <= 3) return 4;
    if (d < 8) return 2;
    return 1;
}

} // namespace

struct SeminormScheme::Impl {
    Grid1D grid;
    double s, p;
    SeminormConfig cfg;
    double h, sp;
    int ncell;

    double c_same = 0.0;  // identical-pair closed form: E += c_same * |m_k|^p
    std::vector<double> touch_xi, touch_eta, touch_w;  // shared-corner rule, factor 2 folded
    std::vector<SepRule> sep;                          // index d-2

    static constexpr int kTailOrder = 8;
    std::vector<double> tail_t;  // kTailOrder nodes
    std::vector<double> tail_w;  // ncell * kTailOrder (factor 2 and h folded)
    double c_bnd = 0.0;          // own-side boundary-cell closed form coefficient

    std::vector<std::pair<int, int>> bands;  // contiguous [dlo,dhi) ranges over separated offsets

    Impl(const Grid1D& g, double s_, double p_, SeminormConfig cfg_)
        : grid(g), s(s_), p(p_), cfg(cfg_), h(g.h), sp(s_ * p_), ncell(g.cell_count()) {
        if (!(s > 0.0 && s < 1.0)) throw InvalidInputError("SeminormScheme: require 0 < s < 1");
        if (!(p >= 1.0)) throw InvalidInputError("SeminormScheme: require p >= 1");
        cfg.validate();
        build_rules();
        build_bands();
    }

    void build_rules() {
        const auto& g = quad::gauss01(cfg.quad_order);
        const int G = cfg.quad_order;

        c_same = 2.0 * std::pow(h, p + 1.0 - sp) / ((p - sp) * (p + 1.0 - sp));

        // touching pairs: annuli A_j of S_j = [0, h 2^-j]^2; the innermost level's
        // weights are scaled by 1/(1-rho), which sums the remaining self-similar
        // tower exactly (the integrand is homogeneous of degree p-1-sp there)
        const int L = cfg.subdivision_levels;
        const double rho = std::pow(2.0, -(p + 1.0 - sp));
        const int offs[3][2] = {{1, 0}, {0, 1}, {1, 1}};
        for (int j = 0; j < L; ++j) {
            const double side = h * std::pow(0.5, j + 1);
            const double tail_scale = (j == L - 1) ? 1.0 / (1.0 - rho) : 1.0;
            for (const auto& o : offs) {
                for (int a = 0; a < G; ++a) {
                    for (int b = 0; b < G; ++b) {
                        const double xi = (o[0] + g.x[a]) * side;
                        const double eta = (o[1] + g.x[b]) * side;
                        touch_xi.push_back(xi);
                        touch_eta.push_back(eta);
                        touch_w.push_back(2.0 * tail_scale * g.w[a] * g.w[b] * side * side *
                                          std::pow(xi + eta, -1.0 - sp));
                    }
                }
            }
        }

        // separated pairs, Toeplitz in the offset; near offsets get subdivided rules
        sep.resize(std::max(0, ncell - 2));
        for (int d = 2; d < ncell; ++d) {
            SepRule& r = sep[d - 2];
            const int nsub = nsub_for_offset(d);
            r.dim = nsub * G;
            r.t.resize(r.dim);
            std::vector<double> w1(r.dim);
            for (int k = 0; k < nsub; ++k) {
                for (int i = 0; i < G; ++i) {
                    r.t[k * G + i] = (k + g.x[i]) / nsub;
                    w1[k * G + i] = g.w[i] / nsub;
                }
            }
            r.w.resize(static_cast<size_t>(r.dim) * r.dim);
            for (int i = 0; i < r.dim; ++i)
                for (int j = 0; j < r.dim; ++j)
                    r.w[static_cast<size_t>(i) * r.dim + j] =
                        2.0 * w1[i] * w1[j] * h * h *
                        std::pow(h * (d + r.t[j] - r.t[i]), -1.0 - sp);
        }

        // exterior tail: fixed Gauss per cell against the closed-form density, with
        // the singular own-side part of each boundary cell in closed form
        const auto& gt = quad::gauss01(kTailOrder);
        tail_t = gt.x;
        tail_w.assign(static_cast<size_t>(ncell) * kTailOrder, 0.0);
        const double a = grid.domain.a, b = grid.domain.b;
        for (int k = 0; k < ncell; ++k) {
            for (int i = 0; i < kTailOrder; ++i) {
                const double x = a + (k + gt.x[i]) * h;
                double dens;
                if (k == 0)
                    dens = std::pow(b - x, -sp) / sp;
                else if (k == ncell - 1)
                    dens = std::pow(x - a, -sp) / sp;
                else
                    dens = (std::pow(x - a, -sp) + std::pow(b - x, -sp)) / sp;
                tail_w[static_cast<size_t>(k) * kTailOrder + i] = 2.0 * h * gt.w[i] * dens;
            }
        }
        c_bnd = 2.0 * std::pow(h, p - sp + 1.0) / ((p - sp + 1.0) * sp);
    }

    void build_bands() {
        bands.clear();
        if (ncell < 3) return;
        double total = 0.0;
        for (int d = 2; d < ncell; ++d)
            total += double(ncell - d) * sep[d - 2].dim * sep[d - 2].dim;
        const int nbands = std::min<int>(64, ncell - 2);
        const double per = total / nbands;
        int dlo = 2;
        double acc = 0.0;
        for (int d = 2; d < ncell; ++d) {
            acc += double(ncell - d) * sep[d - 2].dim * sep[d - 2].dim;
            if (acc >= per && static_cast<int>(bands.size()) < nbands - 1) {
                bands.emplace_back(dlo, d + 1);
                dlo = d + 1;
                acc = 0.0;
            }
        }
        if (dlo < ncell) bands.emplace_back(dlo, ncell);
    }

    // ---- evaluation ----

    template <bool WithGrad, class F, class FD>
    void sep_band(std::span<const double> z, int dlo, int dhi, F f, FD fd, double& energy,
                  std::span<double> grad) const {
        double e = 0.0;
        std::vector<double> V;  // interpolant values at the rule nodes, per cell
        std::vector<double> gk, gl;
        int cur_dim = -1;
        for (int d = dlo; d < dhi; ++d) {
            const SepRule& r = sep[d - 2];
            if (r.dim != cur_dim) {
                cur_dim = r.dim;
                V.assign(static_cast<size_t>(ncell) * cur_dim, 0.0);
                for (int k = 0; k < ncell; ++k)
                    for (int i = 0; i < cur_dim; ++i)
                        V[static_cast<size_t>(k) * cur_dim + i] =
                            z[k] * (1.0 - r.t[i]) + z[k + 1] * r.t[i];
            }
            const int dim = r.dim;
            for (int k = 0; k + d < ncell; ++k) {
                const double* vk = &V[static_cast<size_t>(k) * dim];
                const double* vl = &V[static_cast<size_t>(k + d) * dim];
                if constexpr (WithGrad) {
                    gk.assign(dim, 0.0);
                    gl.assign(dim, 0.0);
                }
                for (int i = 0; i < dim; ++i) {
                    const double* wrow = &r.w[static_cast<size_t>(i) * dim];
                    const double vki = vk[i];
                    double gki = 0.0;
                    for (int j = 0; j < dim; ++j) {
                        const double diff = vl[j] - vki;
                        e += wrow[j] * f(diff);
                        if constexpr (WithGrad) {
                            const double gv = wrow[j] * fd(diff);
                            gl[j] += gv;
                            gki -= gv;
                        }
                    }
                    if constexpr (WithGrad) gk[i] += gki;
                }
                if constexpr (WithGrad) {
                    double a0 = 0, a1 = 0, b0 = 0, b1 = 0;
                    for (int i = 0; i < dim; ++i) {
                        a0 += gk[i] * (1.0 - r.t[i]);
                        a1 += gk[i] * r.t[i];
                        b0 += gl[i] * (1.0 - r.t[i]);
                        b1 += gl[i] * r.t[i];
                    }
                    grad[k] += a0;
                    grad[k + 1] += a1;
                    grad[k + d] += b0;
                    grad[k + d + 1] += b1;
                }
            }
        }
        energy = e;
    }

    template <bool WithGrad, class F, class FD>
    double near_terms(std::span<const double> z, F f, FD fd, std::span<double> grad) const {
        double e = 0.0;
        std::vector<double> m(ncell), gm;
        for (int k = 0; k < ncell; ++k) m[k] = (z[k + 1] - z[k]) / h;
        if constexpr (WithGrad) gm.assign(ncell, 0.0);
        for (int k = 0; k < ncell; ++k) {
            e += c_same * f(m[k]);
            if constexpr (WithGrad) gm[k] += c_same * fd(m[k]);
        }
        const size_t npts = touch_w.size();
        for (int k = 0; k + 1 < ncell; ++k) {
            const double mk = m[k], ml = m[k + 1];
            double gxi = 0.0, geta = 0.0;
            for (size_t q = 0; q < npts; ++q) {
                const double D = mk * touch_xi[q] + ml * touch_eta[q];
                e += touch_w[q] * f(D);
                if constexpr (WithGrad) {
                    const double gv = touch_w[q] * fd(D);
                    gxi += gv * touch_xi[q];
                    geta += gv * touch_eta[q];
                }
            }
            if constexpr (WithGrad) {
                gm[k] += gxi;
                gm[k + 1] += geta;
            }
        }
        if constexpr (WithGrad) {
            for (int k = 0; k < ncell; ++k) {
                grad[k] -= gm[k] / h;
                grad[k + 1] += gm[k] / h;
            }
        }
        return e;
    }

    template <bool WithGrad, class F, class FD>
    double tail_terms(std::span<const double> z, F f, FD fd, std::span<double> grad) const {
        double e = 0.0;
        for (int k = 0; k < ncell; ++k) {
            const double z0 = z[k], z1 = z[k + 1];
            double g0 = 0.0, g1 = 0.0;
            const double* w = &tail_w[static_cast<size_t>(k) * kTailOrder];
            for (int i = 0; i < kTailOrder; ++i) {
                const double t = tail_t[i];
                const double v = z0 * (1.0 - t) + z1 * t;
                e += w[i] * f(v);
                if constexpr (WithGrad) {
                    const double gv = w[i] * fd(v);
                    g0 += gv * (1.0 - t);
                    g1 += gv * t;
                }
            }
            if constexpr (WithGrad) {
                grad[k] += g0;
                grad[k + 1] += g1;
            }
        }
        const double m0 = (z[1] - z[0]) / h;
        const double mn = (z[ncell] - z[ncell - 1]) / h;
        e += c_bnd * (f(m0) + f(mn));
        if constexpr (WithGrad) {
            grad[0] -= c_bnd * fd(m0) / h;
            grad[1] += c_bnd * fd(m0) / h;
            grad[ncell - 1] -= c_bnd * fd(mn) / h;
            grad[ncell] += c_bnd * fd(mn) / h;
        }
        return e;
    }

    template <bool WithGrad, class F, class FD>
    double evaluate(std::span<const double> z, F f, FD fd, std::span<double> grad,
                    bool with_tail) const {
        double e = near_terms<WithGrad>(z, f, fd, grad);
        if (with_tail) e += tail_terms<WithGrad>(z, f, fd, grad);

        const int nb = static_cast<int>(bands.size());
        if (nb > 0) {
            std::vector<double> band_e(nb, 0.0);
            std::vector<std::vector<double>> band_g;
            if constexpr (WithGrad) band_g.assign(nb, std::vector<double>(z.size(), 0.0));
            auto run_band = [&](int bi) {
                std::span<double> g;
                if constexpr (WithGrad) g = std::span<double>(band_g[bi]);
                sep_band<WithGrad>(z, bands[bi].first, bands[bi].second, f, fd, band_e[bi], g);
            };
            const int threads = std::min(detail::thread_budget(cfg.parallel), nb);
            if (threads <= 1) {
                for (int bi = 0; bi < nb; ++bi) run_band(bi);
            } else {
                std::atomic<int> next{0};
                auto worker = [&]() {
                    for (;;) {
                        const int bi = next.fetch_add(1);
                        if (bi >= nb) return;
                        run_band(bi);
                    }
                };
                std::vector<std::thread> pool;
                pool.reserve(threads);
                for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
                for (auto& t : pool) t.join();
            }
            // fixed combination order: the result does not depend on the thread count
            for (int bi = 0; bi < nb; ++bi) {
                e += band_e[bi];
                if constexpr (WithGrad)
                    for (size_t i = 0; i < z.size(); ++i) grad[i] += band_g[bi][i];
            }
        }
        return e;
    }

    template <bool WithGrad>
    double dispatch(std::span<const double> z, std::span<double> grad, bool with_tail) const {
        switch (classify(p)) {
            case PKind::two:
                return evaluate<WithGrad>(
                    z, [](double d) { return d * d; }, [](double d) { return 2.0 * d; }, grad,
                    with_tail);
            case PKind::three:
                return evaluate<WithGrad>(
                    z, [](double d) { return d * d * std::abs(d); },
                    [](double d) { return 3.0 * d * std::abs(d); }, grad, with_tail);
            case PKind::four:
                return evaluate<WithGrad>(
                    z, [](double d) { return (d * d) * (d * d); },
                    [](double d) { return 4.0 * d * d * d; }, grad, with_tail);
            case PKind::general:
            default: {
                const double pp = p;
                return evaluate<WithGrad>(
                    z, [pp](double d) { return std::pow(std::abs(d), pp); },
                    [pp](double d) {
                        return d == 0.0
                                   ? 0.0
                                   : pp * std::pow(std::abs(d), pp - 1.0) * (d > 0 ? 1.0 : -1.0);
                    },
                    grad, with_tail);
            }
        }
    }

    template <bool WithGrad>
    double tail_dispatch(std::span<const double> z, std::span<double> grad) const {
        const double pp = p;
        return tail_terms<WithGrad>(
            z, [pp](double d) { return std::pow(std::abs(d), pp); },
            [pp](double d) {
                return d == 0.0 ? 0.0
                                : pp * std::pow(std::abs(d), pp - 1.0) * (d > 0 ? 1.0 : -1.0);
            },
            grad);
    }

    void check_boundary(std::span<const double> z) const {
        if (z.size() != static_cast<size_t>(ncell + 1))
            throw InvalidInputError("SeminormScheme: nodal array size must be n+2");
        if (z[0] != 0.0 || z[z.size() - 1] != 0.0)
            throw InvalidInputError("tail term requires zero boundary values");
    }

    // p == 2 assembly from the same rules the energies use
    void assemble(dense::Matrix& A, bool with_tail) const {
        if (p != 2.0) throw InvalidInputError("assembly requires p = 2");
        const int N = ncell + 1;
        A = dense::Matrix(N);
        auto add_slope_block = [&](int k, double c) {
            const double v = c / (h * h);  // c * (z_{k+1} - z_k)^2 / h^2
            A(k, k) += v;
            A(k + 1, k + 1) += v;
            A(k, k + 1) -= v;
            A(k + 1, k) -= v;
        };
        for (int k = 0; k < ncell; ++k) add_slope_block(k, c_same);

        // touching: D = -xi/h * z_k + (xi-eta)/h * z_{k+1} + eta/h * z_{k+2}
        double B[3][3] = {};
        for (size_t q = 0; q < touch_w.size(); ++q) {
            const double c[3] = {-touch_xi[q] / h, (touch_xi[q] - touch_eta[q]) / h,
                                 touch_eta[q] / h};
            for (int r = 0; r < 3; ++r)
                for (int cc = 0; cc < 3; ++cc) B[r][cc] += touch_w[q] * c[r] * c[cc];
        }
        for (int k = 0; k + 1 < ncell; ++k)
            for (int r = 0; r < 3; ++r)
                for (int cc = 0; cc < 3; ++cc) A(k + r, k + cc) += B[r][cc];

        for (int d = 2; d < ncell; ++d) {
            const SepRule& r = sep[d - 2];
            double Bd[4][4] = {};
            for (int i = 0; i < r.dim; ++i) {
                for (int j = 0; j < r.dim; ++j) {
                    const double w = r.w[static_cast<size_t>(i) * r.dim + j];
                    const double c[4] = {-(1.0 - r.t[i]), -r.t[i], (1.0 - r.t[j]), r.t[j]};
                    for (int rr = 0; rr < 4; ++rr)
                        for (int cc = 0; cc < 4; ++cc) Bd[rr][cc] += w * c[rr] * c[cc];
                }
            }
            const int idx[4] = {0, 1, d, d + 1};
            for (int k = 0; k + d < ncell; ++k)
                for (int rr = 0; rr < 4; ++rr)
                    for (int cc = 0; cc < 4; ++cc) A(k + idx[rr], k + idx[cc]) += Bd[rr][cc];
        }

        if (with_tail) {
            for (int k = 0; k < ncell; ++k) {
                const double* w = &tail_w[static_cast<size_t>(k) * kTailOrder];
                double Bk[2][2] = {};
                for (int i = 0; i < kTailOrder; ++i) {
                    const double c[2] = {1.0 - tail_t[i], tail_t[i]};
                    for (int rr = 0; rr < 2; ++rr)
                        for (int cc = 0; cc < 2; ++cc) Bk[rr][cc] += w[i] * c[rr] * c[cc];
                }
                for (int rr = 0; rr < 2; ++rr)
                    for (int cc = 0; cc < 2; ++cc) A(k + rr, k + cc) += Bk[rr][cc];
            }
            add_slope_block(0, c_bnd);
            add_slope_block(ncell - 1, c_bnd);
        }
    }
};

SeminormScheme::SeminormScheme(const Grid1D& grid, double s, double p, SeminormConfig cfg)
    : impl_(std::make_unique<Impl>(grid, s, p, cfg)) {}
SeminormScheme::~SeminormScheme() = default;
SeminormScheme::SeminormScheme(SeminormScheme&&) noexcept = default;
SeminormScheme& SeminormScheme::operator=(SeminormScheme&&) noexcept = default;

double SeminormScheme::interior_energy(std::span<const double> z) const {
    return impl_->dispatch<false>(z, {}, false);
}

void SeminormScheme::add_interior_gradient(std::span<const double> z, std::span<double> g) const {
    impl_->dispatch<true>(z, g, false);
}

double SeminormScheme::tail_energy(std::span<const double> z) const {
    impl_->check_boundary(z);
    return impl_->tail_dispatch<false>(z, {});
}

void SeminormScheme::add_tail_gradient(std::span<const double> z, std::span<double> g) const {
    impl_->check_boundary(z);
    impl_->tail_dispatch<true>(z, g);
}

double SeminormScheme::full_energy(std::span<const double> z) const {
    impl_->check_boundary(z);
    return impl_->dispatch<false>(z, {}, true);
}

void SeminormScheme::add_full_gradient(std::span<const double> z, std::span<double> g) const {
    impl_->check_boundary(z);
    impl_->dispatch<true>(z, g, true);
}

void SeminormScheme::assemble_interior(dense::Matrix& A) const { impl_->assemble(A, false); }
void SeminormScheme::assemble_full(dense::Matrix& A) const { impl_->assemble(A, true); }

const Grid1D& SeminormScheme::grid() const { return impl_->grid; }
double SeminormScheme::s() const { return impl_->s; }
double SeminormScheme::p() const { return impl_->p; }

double gagliardo_interior(const DiscreteFunction& u, const FracParams& fp,
                          const SeminormConfig& cfg) {
    if (fp.dim != 1) throw InvalidInputError("gagliardo_interior: dim must be 1");
    SeminormScheme scheme(u.grid, fp.s, fp.p, cfg);
    return scheme.interior_energy(u.padded());
}

double gagliardo_full(const DiscreteFunction& u, const FracParams& fp,
                      const SeminormConfig& cfg) {
    if (fp.dim != 1) throw InvalidInputError("gagliardo_full: dim must be 1");
    SeminormScheme scheme(u.grid, fp.s, fp.p, cfg);
    return scheme.full_energy(u.padded());
}

double wtq_distance(const DiscreteFunction& u, const DiscreteFunction& v, double t, double q,
                    const SeminormConfig& cfg) {
    if (!u.grid.same_geometry(v.grid)) throw InvalidInputError("wtq_distance: grid mismatch");
    if (!(t > 0.0 && t < 1.0)) throw InvalidInputError("wtq_distance: require 0 < t < 1");
    if (!(q >= 1.0)) throw InvalidInputError("wtq_distance: require q >= 1");
    SeminormScheme scheme(u.grid, t, q, cfg);
    return std::pow(scheme.full_energy(subtract(u, v).padded()), 1.0 / q);
}

} // namespace fraclim
