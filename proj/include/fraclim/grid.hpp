#pragma once

#include <algorithm>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fraclim/errors.hpp"

namespace fraclim {

/// Open interval (a,b) with boundary-distance function delta(x) = min(x-a, b-x).
struct IntervalDomain {
    double a;
    double b;

    IntervalDomain(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw InvalidInputError("IntervalDomain: require a < b");
    }
    double diam() const { return b - a; }
    double boundary_distance(double x) const {
        return std::min(x - a, b - x);
    }
    bool contains(double x) const { return x > a && x < b; }
};

/// Uniform grid with n interior nodes x_i = a + i*h, h = (b-a)/(n+1).
/// The n+1 cells include the two boundary cells [a, x_1] and [x_n, b].
struct Grid1D {
    IntervalDomain domain;
    int n;
    double h;

    Grid1D(IntervalDomain dom, int n_) : domain(dom), n(n_), h((dom.b - dom.a) / (n_ + 1)) {
        if (n < 1) throw InvalidInputError("Grid1D: require at least one interior node");
    }
    double node(int i) const { return domain.a + i * h; }  // i = 0..n+1 (0 and n+1 are endpoints)
    int cell_count() const { return n + 1; }
    bool same_geometry(const Grid1D& o) const {
        return n == o.n && domain.a == o.domain.a && domain.b == o.domain.b;
    }
};

/// Nodal values at the interior nodes of a grid; the represented function is the
/// piecewise-linear interpolant, zero at the endpoints and on all of R outside (a,b).
struct DiscreteFunction {
    Grid1D grid;
    std::vector<double> values;

    DiscreteFunction(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
        if (static_cast<int>(values.size()) != grid.n)
            throw InvalidInputError("DiscreteFunction: values length must equal interior node count");
    }
    explicit DiscreteFunction(Grid1D g) : grid(g), values(g.n, 0.0) {}

    /// Nodal array padded with the zero endpoint values (size n+2).
    std::vector<double> padded() const {
        std::vector<double> z(grid.n + 2, 0.0);
        for (int i = 0; i < grid.n; ++i) z[i + 1] = values[i];
        return z;
    }
    double max_abs() const;               // = L^inf norm of the interpolant
};

/// Sample f at the interior nodes.
DiscreteFunction sample(const Grid1D& grid, const std::function<double(double)>& f);

/// The hat min(x-a, b-x) scaled to the grid; exactly representable when n is odd.
DiscreteFunction hat_function(const Grid1D& grid);

/// Fractional parameters (s,p) and ambient dimension N.
struct FracParams {
    double s;
    double p;
    int dim = 1;

    FracParams(double s_, double p_, int dim_ = 1) : s(s_), p(p_), dim(dim_) {
        if (!(s > 0.0 && s < 1.0)) throw InvalidInputError("FracParams: require 0 < s < 1");
        if (!(p > 1.0)) throw InvalidInputError("FracParams: require p > 1");
        if (dim < 1) throw InvalidInputError("FracParams: require dim >= 1");
    }
    double sp() const { return s * p; }
    double p_conj() const { return p / (p - 1.0); }
    void require_sp_above(double bound, const char* who) const {
        if (!(sp() > bound))
            throw RegimeError(std::string(who) + ": requires s*p > " + std::to_string(bound));
    }
};

/// (int_a^b |u|^p dx)^{1/p} of the interpolant; exact per cell via the
/// antiderivative of |w|^p (the converged limit of any cell-wise Gauss rule).
double lp_norm(const DiscreteFunction& u, double p);

/// Same on a full nodal array (boundary values included), for pinned-boundary states.
double lp_norm_padded(std::span<const double> z, double h, double p);

/// u / lp_norm(u,p); degenerate-input error on the zero function.
DiscreteFunction normalize_lp(const DiscreteFunction& u, double p);

/// (sum_cells h*|slope|^p)^{1/p}, boundary cells included; exact for interpolants.
double local_gradient_norm(const DiscreteFunction& u, double p);
double local_gradient_norm_padded(std::span<const double> z, double h, double p);

/// L^r norm of the interpolant (r >= 1), cell-wise; r = +inf handled by max_abs.
double lr_norm(const DiscreteFunction& u, double r);

/// Piecewise-linear Gramian inner product int u*v dx (both on the same grid).
double mass_inner(const DiscreteFunction& u, const DiscreteFunction& v);

/// u - v on a shared grid; grid mismatch -> invalid-input error.
DiscreteFunction subtract(const DiscreteFunction& u, const DiscreteFunction& v);
DiscreteFunction scale(const DiscreteFunction& u, double c);

/// CSV serialization: header `x,value`, one row per interior node.
void write_csv(const DiscreteFunction& u, const std::string& path);

} // namespace fraclim
