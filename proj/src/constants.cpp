#include "fraclim/constants.hpp"

#include <cmath>

#include "fraclim/quadrature.hpp"

namespace fraclim {

namespace {

void validate_kconst_args(double p, int N) {
    if (!(p > 1.0)) throw InvalidInputError("kconst: p must exceed 1");
    if (N < 1) throw InvalidInputError("kconst: dim must be >= 1");
}

double sphere_area(int dim) {  // |S^{dim}| for dim >= 0
    return 2.0 * std::pow(M_PI, (dim + 1) / 2.0) / std::tgamma((dim + 1) / 2.0);
}

// (1/p) int_0^{2pi} |cos(theta - theta0)|^p dtheta by a periodic trapezoid rule;
// the |.|^p kinks limit the rate to M^{-(p+1)}, so M is taken large.
double kconst_circle(double p, double theta0) {
    const int M = 1 << 16;
    double acc = 0.0;
    for (int i = 0; i < M; ++i) {
        const double th = 2.0 * M_PI * i / M;
        acc += std::pow(std::abs(std::cos(th - theta0)), p);
    }
    return acc * (2.0 * M_PI / M) / p;
}

} // namespace

double kconst(double p, int N, KMethod method) {
    validate_kconst_args(p, N);
    if (method == KMethod::closed_form)
        return 2.0 * std::pow(M_PI, (N - 1) / 2.0) / p * std::tgamma((p + 1.0) / 2.0) /
               std::tgamma((N + p) / 2.0);
    // quadrature
    if (N == 1) return 2.0 / p;  // S^0 = {-1,+1} with counting measure
    if (N == 2) return kconst_circle(p, 0.0);
    // N >= 3: reduce to the polar angle, c = cos(phi):
    //   int_{S^{N-1}} |<sigma,e>|^p = |S^{N-2}| int_{-1}^{1} |c|^p (1-c^2)^{(N-3)/2} dc
    const double wexp = (N - 3) / 2.0;
    auto f = [p, wexp](double c) {
        return std::pow(std::abs(c), p) * std::pow(1.0 - c * c, wexp);
    };
    // algebraic behavior at both c = +-1 ((1-c^2)^{(N-3)/2}) and at the |c|^p kink
    // at 0: split at +-1/2 and refine each piece toward its awkward end
    const double integral = quad::integrate_singular_endpoint(f, -0.5, 0.0, true, 48, 16) +
                            quad::integrate_singular_endpoint(f, 0.0, 0.5, false, 48, 16) +
                            quad::integrate_singular_endpoint(f, -1.0, -0.5, false, 48, 16) +
                            quad::integrate_singular_endpoint(f, 0.5, 1.0, true, 48, 16);
    return sphere_area(N - 2) * integral / p;
}

double kconst_directional(double p, int N, std::span<const double> direction) {
    validate_kconst_args(p, N);
    if (static_cast<int>(direction.size()) != N)
        throw InvalidInputError("kconst_directional: direction length must equal dim");
    double nrm = 0.0;
    for (double c : direction) nrm += c * c;
    nrm = std::sqrt(nrm);
    if (!(nrm > 0.0)) throw InvalidInputError("kconst_directional: zero direction");
    if (N == 2) {
        const double theta0 = std::atan2(direction[1] / nrm, direction[0] / nrm);
        return kconst_circle(p, theta0);
    }
    if (N == 3) {
        // tensor rule: Gauss in c = cos(phi), trapezoid in theta, no pole alignment
        const int Mc = 2048, Mt = 2048;
        const auto& g = quad::gauss01(12);
        const double ex = direction[0] / nrm, ey = direction[1] / nrm, ez = direction[2] / nrm;
        double acc = 0.0;
        const int panels = Mc / 12;
        for (int pnl = 0; pnl < panels; ++pnl) {
            for (size_t i = 0; i < g.x.size(); ++i) {
                const double c = -1.0 + 2.0 * (pnl + g.x[i]) / panels;
                const double wc = 2.0 * g.w[i] / panels;
                const double sphi = std::sqrt(std::max(0.0, 1.0 - c * c));
                double inner = 0.0;
                for (int j = 0; j < Mt; ++j) {
                    const double th = 2.0 * M_PI * j / Mt;
                    const double dot = sphi * std::cos(th) * ex + sphi * std::sin(th) * ey + c * ez;
                    inner += std::pow(std::abs(dot), p);
                }
                acc += wc * inner * (2.0 * M_PI / Mt);
            }
        }
        return acc / p;
    }
    throw InvalidInputError("kconst_directional: only dim 2 and 3 supported");
}

HardyConstants hardy_constants(const FracParams& fp) {
    fp.require_sp_above(1.0, "hardy_constants");
    const double s = fp.s, p = fp.p;
    const int N = fp.dim;
    const double sp = fp.sp();
    const double gamma = (sp - 1.0) / p;

    // int_0^1 (1 - r^gamma)^p / (1-r)^{1+sp} dr, written in v = 1-r so that
    // 1 - r^gamma = -expm1(gamma log1p(-v)) stays accurate where it cancels.
    // The integrand blows up like gamma^p v^{p-1-sp} at v = 0 (integrable since
    // sp < p) and carries the r^gamma derivative kink at v = 1; both ends get
    // the dyadic treatment.
    auto fv = [gamma, p, sp](double v) {
        const double num = -std::expm1(gamma * std::log1p(-v));
        return std::pow(num, p) * std::pow(v, -1.0 - sp);
    };
    const double I = quad::integrate_singular_endpoint(fv, 0.0, 0.5, false, 45, 16) +
                     quad::integrate_singular_endpoint(fv, 0.5, 1.0, true, 45, 16);

    HardyConstants out;
    out.d_sharp = 2.0 * std::pow(M_PI, (N - 1) / 2.0) * std::tgamma((1.0 + sp) / 2.0) /
                  std::tgamma((N + sp) / 2.0) * I;

    auto c1f = [p](double t) { return std::pow(t, (p - 1.0) / 2.0) * std::exp(-t); };
    out.c1 = quad::integrate_singular_endpoint(c1f, 0.0, 1.0, false, 48, 16);
    auto c2a = [N](double t) { return std::pow(t, (N - 1.0) / 2.0) * std::exp(-t); };
    auto c2b = [N, p](double t) { return std::pow(t, (N - 2.0 + p) / 2.0) * std::exp(-t); };
    out.c2 = quad::integrate_singular_endpoint(c2a, 0.0, 1.0, false, 48, 16) +
             quad::integrate_to_infinity(c2b, 1.0, 16);

    const double c_np = 2.0 * std::pow(M_PI, (N - 1) / 2.0) * out.c1 / (p * out.c2);
    out.c_lower = std::pow((sp - 1.0) / p, p) * c_np / (1.0 - s);
    return out;
}

double sobolev_bound(const FracParams& fp) {
    if (!(fp.sp() < fp.dim)) throw RegimeError("sobolev_bound: requires s*p < N");
    return fp.s * (1.0 - fp.s);
}

} // namespace fraclim
