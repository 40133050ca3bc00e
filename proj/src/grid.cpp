#include "fraclim/grid.hpp"

#include <cmath>
#include <fstream>

#include "fraclim/quadrature.hpp"

namespace fraclim {

namespace {

// int_0^1 |v0 + (v1-v0) t|^p dt via the antiderivative G(w) = |w|^p w / (p+1),
// which is exact across a sign change of the linear segment.
double cell_abs_pow_integral(double v0, double v1, double p) {
    const double d = v1 - v0;
    const double scale = std::abs(v0) + std::abs(v1);
    if (scale == 0.0) return 0.0;
    if (std::abs(d) <= 1e-12 * scale) {
        const double mid = 0.5 * (v0 + v1);
        return std::pow(std::abs(mid), p);
    }
    auto G = [p](double w) { return std::pow(std::abs(w), p) * w / (p + 1.0); };
    return (G(v1) - G(v0)) / d;
}

} // namespace

double DiscreteFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

DiscreteFunction sample(const Grid1D& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.n);
    for (int i = 0; i < grid.n; ++i) v[i] = f(grid.node(i + 1));
    return DiscreteFunction(grid, std::move(v));
}

DiscreteFunction hat_function(const Grid1D& grid) {
    const IntervalDomain& d = grid.domain;
    return sample(grid, [&d](double x) { return std::min(x - d.a, d.b - x); });
}

double lp_norm_padded(std::span<const double> z, double h, double p) {
    if (p < 1.0) throw InvalidInputError("lp_norm: require p >= 1");
    if (z.size() < 2) throw InvalidInputError("lp_norm: empty grid");
    double acc = 0.0;
    for (size_t k = 0; k + 1 < z.size(); ++k)
        acc += cell_abs_pow_integral(z[k], z[k + 1], p);
    return std::pow(h * acc, 1.0 / p);
}

double lp_norm(const DiscreteFunction& u, double p) {
    return lp_norm_padded(u.padded(), u.grid.h, p);
}

DiscreteFunction normalize_lp(const DiscreteFunction& u, double p) {
    const double nrm = lp_norm(u, p);
    if (!(nrm > 0.0)) throw InvalidInputError("normalize_lp: degenerate (zero) input");
    return scale(u, 1.0 / nrm);
}

double local_gradient_norm_padded(std::span<const double> z, double h, double p) {
    double acc = 0.0;
    for (size_t k = 0; k + 1 < z.size(); ++k) {
        const double slope = (z[k + 1] - z[k]) / h;
        acc += h * std::pow(std::abs(slope), p);
    }
    return std::pow(acc, 1.0 / p);
}

double local_gradient_norm(const DiscreteFunction& u, double p) {
    return local_gradient_norm_padded(u.padded(), u.grid.h, p);
}

double lr_norm(const DiscreteFunction& u, double r) {
    return lp_norm(u, r);
}

double mass_inner(const DiscreteFunction& u, const DiscreteFunction& v) {
    if (!u.grid.same_geometry(v.grid)) throw InvalidInputError("mass_inner: grid mismatch");
    const auto zu = u.padded();
    const auto zv = v.padded();
    const double h = u.grid.h;
    double acc = 0.0;
    // exact Gramian of linear segments: h/6 * (2 u0 v0 + u0 v1 + u1 v0 + 2 u1 v1)
    for (size_t k = 0; k + 1 < zu.size(); ++k)
        acc += h / 6.0 * (2.0 * zu[k] * zv[k] + zu[k] * zv[k + 1] + zu[k + 1] * zv[k] +
                          2.0 * zu[k + 1] * zv[k + 1]);
    return acc;
}

DiscreteFunction subtract(const DiscreteFunction& u, const DiscreteFunction& v) {
    if (!u.grid.same_geometry(v.grid)) throw InvalidInputError("subtract: grid mismatch");
    std::vector<double> w(u.values.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = u.values[i] - v.values[i];
    return DiscreteFunction(u.grid, std::move(w));
}

DiscreteFunction scale(const DiscreteFunction& u, double c) {
    std::vector<double> w(u.values.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = c * u.values[i];
    return DiscreteFunction(u.grid, std::move(w));
}

void write_csv(const DiscreteFunction& u, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "x,value\n";
    char buf[64];
    for (int i = 0; i < u.grid.n; ++i) {
        std::snprintf(buf, sizeof(buf), "%#.12g,%#.12g\n", u.grid.node(i + 1), u.values[i]);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

} // namespace fraclim
