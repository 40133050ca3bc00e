#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fraclim/dense.hpp"
#include "fraclim/energy.hpp"
#include "fraclim/grid.hpp"

namespace fraclim {

struct SolverConfig {
    int max_iter = 5000;
    double tol = 1e-9;        ///< relative Rayleigh-quotient change at termination
    double bt_shrink = 0.5;
    double bt_decrease = 1e-4;
    unsigned long seed = 0;
    int path_points = 33;     ///< string-method states, odd and >= 9
    bool precondition = true; ///< H^1 (tridiagonal) metric for the descent direction

    void validate() const {
        if (!(tol > 0)) throw InvalidInputError("SolverConfig: tol > 0");
        if (path_points < 9 || path_points % 2 == 0)
            throw InvalidInputError("SolverConfig: path_points odd and >= 9");
    }
};

struct EigenResult {
    double lambda = 0.0;
    DiscreteFunction eigenfunction;
    int iterations = 0;
    double residual = 0.0;    ///< relative Rayleigh change at the last step
    int mode_index = 1;
};

/// lambda^s_{1,p}: global minimum of gagliardo_full over the Lp unit sphere, by
/// projected gradient descent with backtracking and per-step renormalization.
/// Default initialization is the (positive) hat; `init` overrides it (warm starts).
EigenResult first_eigen_fractional(const Grid1D& grid, const FracParams& fp,
                                   const SolverConfig& cfg = {}, const SeminormConfig& scfg = {},
                                   const std::optional<DiscreteFunction>& init = std::nullopt);

/// lambda^s_{2,p}: mountain-pass level over paths joining u1 and -u1, by the string
/// method with fixed endpoints, arclength reparametrization each sweep, and a
/// parabolic refinement of the discrete peak. Also returns the argmax state.
EigenResult second_eigen_fractional(const Grid1D& grid, const FracParams& fp,
                                    const EigenResult& u1,
                                    const SolverConfig& cfg = {}, const SeminormConfig& scfg = {});

/// All variational structure for p = 2 via the assembled stiffness/mass pair and the
/// in-repo dense symmetric eigensolver; returns the lowest m_max modes, M-normalized.
std::vector<EigenResult> dense_eigen_p2(const Grid1D& grid, const FracParams& fp,
                                        int m_max, const SeminormConfig& scfg = {});

/// Local Dirichlet p-Laplacian eigenvalues (m = 1,2) with energy |grad u|_p^p; the
/// limit targets K(p,N) * lambda^1_{m,p} of the singular limit.
EigenResult local_eigen(const Grid1D& grid, double p, int m, const SolverConfig& cfg = {});

/// Cell problem on Q = (-1/2,1/2): minimize the interior seminorm over
/// v = Psi_a + w with w vanishing on the boundary, Psi_a(x) = a*x, a = +-1.
/// Returns ((1-s) * minimal energy, minimizer). Requires sp > 1.
std::pair<double, DiscreteFunction> cell_problem(const FracParams& fp, int n, int a_sign,
                                                 const SolverConfig& cfg = {},
                                                 const SeminormConfig& scfg = {});

/// ||F||_{W^{-s,p'}} / (1-s)^{1/p} via the homogeneity identity
///   p^{1/p} * (-p' * min_u { (1-s)[u]^p - <F,u> })^{1/p'}
/// with the unconstrained convex minimum found by gradient descent with backtracking.
double dual_norm_fractional(const DiscreteFunction& F, const FracParams& fp,
                            const SolverConfig& cfg = {}, const SeminormConfig& scfg = {});

/// ||F||_{W^{-1,p'}} with energy |grad u|_p^p (no (1-s) factor).
double dual_norm_local(const DiscreteFunction& F, double p, const SolverConfig& cfg = {});

/// Courant minimax over m-dimensional subspaces of a small SPD matrix (d <= 8):
/// random orthonormal frames refined by descent on the largest projected Rayleigh
/// value, Gram-Schmidt retraction; best value over `trials` starts.
double courant_minimax(const dense::Matrix& Q, int m, int trials, unsigned long seed = 0);

} // namespace fraclim
