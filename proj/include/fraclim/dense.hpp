#pragma once

#include <span>
#include <vector>

#include "fraclim/errors.hpp"

namespace fraclim::dense {

/// Row-major square matrix.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    Matrix() = default;
    explicit Matrix(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, 0.0) {}
    double& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

double max_asymmetry(const Matrix& m);

/// y = M x
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
double quadratic_form(const Matrix& m, std::span<const double> x);

/// Solve M x = b for symmetric positive definite M (in-place Cholesky on a copy).
std::vector<double> cholesky_solve(const Matrix& m, std::span<const double> b);

/// Symmetric tridiagonal mass-style matrix with constant bands.
struct TriDiag {
    std::vector<double> diag;
    std::vector<double> off;  // size n-1

    int size() const { return static_cast<int>(diag.size()); }
};

/// Piecewise-linear Gramian on interior nodes: diag 2h/3, off h/6.
TriDiag mass_tridiag(int n, double h);

std::vector<double> tridiag_matvec(const TriDiag& t, std::span<const double> x);
/// Solve T x = b (Thomas algorithm). T must be positive definite.
std::vector<double> tridiag_solve(const TriDiag& t, std::span<const double> b);

struct SymmetricEigen {
    std::vector<double> values;  ///< ascending
    Matrix vectors;              ///< columns are eigenvectors
};

/// Dense symmetric eigensolver: Householder tridiagonalization followed by
/// implicit-shift QL sweeps. Values ascending, vectors orthonormal.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Generalized symmetric eigenproblem A v = lambda M v with tridiagonal SPD M:
/// reduce via M = L L^T to standard form, then symmetric_eigen. Returned vectors
/// are M-orthonormal.
SymmetricEigen generalized_eigen(const Matrix& a, const TriDiag& m);

} // namespace fraclim::dense
