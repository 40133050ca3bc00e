#include "fraclim/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fraclim::dense {

double max_asymmetry(const Matrix& m) {
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = i + 1; j < m.n; ++j) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    return worst;
}

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
    std::vector<double> y(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        const double* row = &m.a[static_cast<size_t>(i) * m.n];
        double acc = 0.0;
        for (int j = 0; j < m.n; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
    return y;
}

double quadratic_form(const Matrix& m, std::span<const double> x) {
    double acc = 0.0;
    for (int i = 0; i < m.n; ++i) {
        const double* row = &m.a[static_cast<size_t>(i) * m.n];
        double r = 0.0;
        for (int j = 0; j < m.n; ++j) r += row[j] * x[j];
        acc += x[i] * r;
    }
    return acc;
}

std::vector<double> cholesky_solve(const Matrix& m, std::span<const double> b) {
    const int n = m.n;
    Matrix L(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = m(i, j);
            for (int k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
            if (i == j) {
                if (!(sum > 0.0)) throw InvalidInputError("cholesky_solve: matrix not positive definite");
                L(i, i) = std::sqrt(sum);
            } else {
                L(i, j) = sum / L(j, j);
            }
        }
    }
    std::vector<double> y(b.begin(), b.end());
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < i; ++k) y[i] -= L(i, k) * y[k];
        y[i] /= L(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int k = i + 1; k < n; ++k) y[i] -= L(k, i) * y[k];
        y[i] /= L(i, i);
    }
    return y;
}

TriDiag mass_tridiag(int n, double h) {
    TriDiag t;
    t.diag.assign(n, 2.0 * h / 3.0);
    t.off.assign(n > 0 ? n - 1 : 0, h / 6.0);
    return t;
}

std::vector<double> tridiag_matvec(const TriDiag& t, std::span<const double> x) {
    const int n = t.size();
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = t.diag[i] * x[i];
        if (i > 0) acc += t.off[i - 1] * x[i - 1];
        if (i + 1 < n) acc += t.off[i] * x[i + 1];
        y[i] = acc;
    }
    return y;
}

std::vector<double> tridiag_solve(const TriDiag& t, std::span<const double> b) {
    const int n = t.size();
    std::vector<double> c(n, 0.0), d(n, 0.0);
    double piv = t.diag[0];
    if (piv == 0.0) throw InvalidInputError("tridiag_solve: zero pivot");
    c[0] = (n > 1 ? t.off[0] : 0.0) / piv;
    d[0] = b[0] / piv;
    for (int i = 1; i < n; ++i) {
        piv = t.diag[i] - t.off[i - 1] * c[i - 1];
        if (piv == 0.0) throw InvalidInputError("tridiag_solve: zero pivot");
        c[i] = (i + 1 < n ? t.off[i] : 0.0) / piv;
        d[i] = (b[i] - t.off[i - 1] * d[i - 1]) / piv;
    }
    for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
    return d;
}

namespace {

// Householder reduction to tridiagonal form with accumulated transform (tred2).
void tridiagonalize(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
    const int n = a.n;
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        const int l = i - 1;
        if (d[i] != 0.0) {
            for (int j = 0; j <= l; ++j) {
                double g = 0.0;
                for (int k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (int k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (int j = 0; j <= l; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

double hypot2(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL sweeps on the tridiagonal (d,e) with eigenvector accumulation (tql2).
void ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 2.22e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw InvalidInputError("symmetric_eigen: QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace

SymmetricEigen symmetric_eigen(const Matrix& a_in) {
    if (max_asymmetry(a_in) > 1e-12)
        throw InvalidInputError("symmetric_eigen: matrix not symmetric to 1e-12");
    Matrix a = a_in;
    std::vector<double> d, e;
    tridiagonalize(a, d, e);
    ql_implicit(d, e, a);
    // sort ascending, permuting columns
    const int n = a.n;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });
    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = Matrix(n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = d[order[j]];
        for (int i = 0; i < n; ++i) out.vectors(i, j) = a(i, order[j]);
    }
    return out;
}

SymmetricEigen generalized_eigen(const Matrix& a, const TriDiag& m) {
    const int n = a.n;
    if (m.size() != n) throw InvalidInputError("generalized_eigen: size mismatch");
    // M = L L^T with bidiagonal L
    std::vector<double> ld(n, 0.0), le(n > 0 ? n - 1 : 0, 0.0);
    ld[0] = std::sqrt(m.diag[0]);
    for (int i = 1; i < n; ++i) {
        le[i - 1] = m.off[i - 1] / ld[i - 1];
        const double v = m.diag[i] - le[i - 1] * le[i - 1];
        if (!(v > 0.0)) throw InvalidInputError("generalized_eigen: mass matrix not positive definite");
        ld[i] = std::sqrt(v);
    }
    // C = L^{-1} A L^{-T}
    Matrix c = a;
    for (int j = 0; j < n; ++j) {  // forward substitution on each column: L X = A
        c(0, j) /= ld[0];
        for (int i = 1; i < n; ++i) c(i, j) = (c(i, j) - le[i - 1] * c(i - 1, j)) / ld[i];
    }
    for (int i = 0; i < n; ++i) {  // then on each row: C L^T = X  =>  L C^T = X^T
        c(i, 0) /= ld[0];
        for (int j = 1; j < n; ++j) c(i, j) = (c(i, j) - le[j - 1] * c(i, j - 1)) / ld[j];
    }
    // symmetrize rounding
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = c(j, i) = v;
        }
    SymmetricEigen eig = symmetric_eigen(c);
    // back-transform: v = L^{-T} y, column by column
    for (int j = 0; j < n; ++j) {
        for (int i = n - 1; i >= 0; --i) {
            double v = eig.vectors(i, j);
            if (i + 1 < n) v -= le[i] * eig.vectors(i + 1, j);
            eig.vectors(i, j) = v / ld[i];
        }
    }
    // M-normalize (exact up to rounding already)
    for (int j = 0; j < n; ++j) {
        std::vector<double> col(n);
        for (int i = 0; i < n; ++i) col[i] = eig.vectors(i, j);
        const auto mv = tridiag_matvec(m, col);
        double nrm = 0.0;
        for (int i = 0; i < n; ++i) nrm += col[i] * mv[i];
        nrm = std::sqrt(nrm);
        for (int i = 0; i < n; ++i) eig.vectors(i, j) /= nrm;
    }
    return eig;
}

} // namespace fraclim::dense
