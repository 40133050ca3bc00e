#pragma once

#include <span>

#include "fraclim/grid.hpp"

namespace fraclim {

enum class KMethod { quadrature, closed_form };

/// K(p,N) = (1/p) int_{S^{N-1}} |<sigma,e>|^p dH^{N-1}.
/// quadrature: counting measure (N=1), periodic trapezoid in the angle (N=2),
/// polar reduction with weight (1-c^2)^{(N-3)/2} (N>=3).
/// closed_form: (2 pi^{(N-1)/2} / p) * Gamma((p+1)/2) / Gamma((N+p)/2).
double kconst(double p, int N, KMethod method = KMethod::closed_form);

/// Direction dependence probe: the same surface integral evaluated with an
/// arbitrary unit direction (N = 2 or 3), without rotating to the pole.
double kconst_directional(double p, int N, std::span<const double> direction);

/// Constants from the sharp Hardy inequality on convex sets (requires sp > 1).
struct HardyConstants {
    double d_sharp;  ///< optimal constant D_{N,p,s}
    double c_lower;  ///< ((sp-1)/p)^p * C_{N,p} / (1-s), the proved lower bound
    double c1;       ///< int_0^1 t^{(p-1)/2} e^{-t} dt
    double c2;       ///< int_0^1 t^{(N-1)/2} e^{-t} dt + int_1^inf t^{(N-2+p)/2} e^{-t} dt
};

HardyConstants hardy_constants(const FracParams& fp);

/// Shape factor s(1-s) of the sharp fractional Sobolev bound (requires sp < N);
/// the multiplicative constant is not explicit, so ratio boundedness is what the
/// study harness checks.
double sobolev_bound(const FracParams& fp);

} // namespace fraclim
