#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fraclim/grid.hpp"

namespace fraclim {

namespace dense { struct Matrix; }

/// Accuracy knobs for the singular double integrals.
struct SeminormConfig {
    int subdivision_levels = 8;  ///< dyadic levels toward the diagonal of touching cell pairs
    int quad_order = 4;          ///< Gauss points per subcell per axis
    bool parallel = true;

    void validate() const {
        if (subdivision_levels < 1 || subdivision_levels > 20)
            throw InvalidInputError("SeminormConfig: subdivision_levels in [1,20]");
        if (quad_order < 2 || quad_order > 12)
            throw InvalidInputError("SeminormConfig: quad_order in [2,12]");
    }
};

/// Closed form of int_{R \ (a,b)} |x-y|^{-1-sp} dy for interior x:
/// ((x-a)^{-sp} + (b-x)^{-sp}) / (sp).
double tail_density(double x, const IntervalDomain& dom, const FracParams& fp);

/// Precomputed quadrature tables for the Gagliardo double integral of a
/// piecewise-linear function on one grid at fixed (s,p).
///
/// Cell-pair decomposition (all exact in h by homogeneity):
///  - identical pairs: the integrand is |m|^p |x-y|^{p-1-sp}, integrated in closed form;
///  - touching pairs:  the integrand is exactly homogeneous about the shared node, so
///    dyadic annuli toward the corner carry Gauss rules and the innermost annulus
///    weight is scaled by 1/(1-rho), rho = 2^{-(p+1-sp)}, summing the infinite
///    subdivision exactly;
///  - separated pairs: tensor Gauss per pair; weights depend only on the cell offset
///    (Toeplitz), with extra subdivision for near offsets where the kernel is steep.
///
/// Energies are exposed to the p-th power. The evaluation order is fixed (band by
/// band), so results are independent of the thread count.
class SeminormScheme {
public:
    SeminormScheme(const Grid1D& grid, double s, double p, SeminormConfig cfg = {});
    ~SeminormScheme();
    SeminormScheme(SeminormScheme&&) noexcept;
    SeminormScheme& operator=(SeminormScheme&&) noexcept;

    /// [u]^p_{W^{s,p}((a,b))} for the full nodal array z (size n+2, boundary included).
    double interior_energy(std::span<const double> z) const;
    /// d/dz of interior_energy, accumulated into g (same layout as z).
    void add_interior_gradient(std::span<const double> z, std::span<double> g) const;

    /// Exterior contribution 2 int |u|^p tail_density; requires z[0] = z[n+1] = 0.
    double tail_energy(std::span<const double> z) const;
    void add_tail_gradient(std::span<const double> z, std::span<double> g) const;

    double full_energy(std::span<const double> z) const;
    void add_full_gradient(std::span<const double> z, std::span<double> g) const;

    /// p == 2 only: assemble the (n+2)x(n+2) stiffness of the interior or full form
    /// (same quadrature as the energies, so z^T A z reproduces them to rounding).
    void assemble_interior(dense::Matrix& A) const;
    void assemble_full(dense::Matrix& A) const;

    const Grid1D& grid() const;
    double s() const;
    double p() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// [u]^p_{W^{s,p}(Omega x Omega)} of the zero-extended interpolant.
double gagliardo_interior(const DiscreteFunction& u, const FracParams& fp,
                          const SeminormConfig& cfg = {});

/// [u]^p_{W^{s,p}(R)} = interior + exterior tail.
double gagliardo_full(const DiscreteFunction& u, const FracParams& fp,
                      const SeminormConfig& cfg = {});

/// [u - v]_{W^{t,q}(R)} (the 1/q root); u,v must share a grid.
double wtq_distance(const DiscreteFunction& u, const DiscreteFunction& v,
                    double t, double q, const SeminormConfig& cfg = {});

namespace detail {
/// Fixed-band deterministic parallel reduction; band results are combined in band
/// order regardless of thread count. FRACLIM_THREADS caps the pool.
int thread_budget(bool parallel);
}

} // namespace fraclim
