#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclim/dense.hpp"

using namespace fraclim::dense;

namespace {

Matrix random_symmetric(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = gauss(rng);
            a(i, j) = v;
            a(j, i) = v;
        }
    return a;
}

} // namespace

TEST_CASE("symmetric eigensolver on the discrete Laplacian") {
    // second difference matrix (1/h^2) tridiag(-1,2,-1): lambda_k = 4 sin^2(k pi h / 2)/h^2
    const int n = 30;
    const double h = 1.0 / (n + 1);
    Matrix a(n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0 / (h * h);
        if (i + 1 < n) {
            a(i, i + 1) = -1.0 / (h * h);
            a(i + 1, i) = -1.0 / (h * h);
        }
    }
    const auto eig = symmetric_eigen(a);
    for (int k = 1; k <= n; ++k) {
        const double exact = 4.0 * std::pow(std::sin(k * M_PI * h / 2.0), 2) / (h * h);
        CHECK(eig.values[k - 1] == doctest::Approx(exact).epsilon(1e-10));
    }
    SUBCASE("residuals and orthonormality") {
        for (int j = 0; j < n; ++j) {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i) v[i] = eig.vectors(i, j);
            const auto av = matvec(a, v);
            for (int i = 0; i < n; ++i)
                CHECK(av[i] == doctest::Approx(eig.values[j] * v[i]).epsilon(1e-8));
        }
        for (int j = 0; j < n; ++j)
            for (int k = j; k < n; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += eig.vectors(i, j) * eig.vectors(i, k);
                CHECK(dot == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-10));
            }
    }
}

TEST_CASE("symmetric eigensolver on random matrices") {
    for (unsigned seed : {1u, 17u}) {
        const int n = 25;
        const auto a = random_symmetric(n, seed);
        const auto eig = symmetric_eigen(a);
        double trace = 0.0, sum = 0.0;
        for (int i = 0; i < n; ++i) {
            trace += a(i, i);
            sum += eig.values[i];
        }
        CHECK(trace == doctest::Approx(sum).epsilon(1e-10));
        for (int j = 0; j + 1 < n; ++j) CHECK(eig.values[j] <= eig.values[j + 1]);
    }
}

TEST_CASE("asymmetry is rejected") {
    Matrix a(3);
    a(0, 1) = 1.0;
    a(1, 0) = 1.0 + 1e-6;
    CHECK_THROWS_AS(symmetric_eigen(a), fraclim::InvalidInputError);
}

TEST_CASE("generalized eigensolver matches the P1 closed form") {
    // (1/h) tridiag(-1,2,-1) v = lambda M v with the consistent mass matrix:
    // lambda_k = (6/h^2) (1-cos(k pi h)) / (2+cos(k pi h))
    const int n = 40;
    const double h = 1.0 / (n + 1);
    Matrix a(n);
    for (int i = 0; i < n; ++i) {
        a(i, i) = 2.0 / h;
        if (i + 1 < n) {
            a(i, i + 1) = -1.0 / h;
            a(i + 1, i) = -1.0 / h;
        }
    }
    const auto m = mass_tridiag(n, h);
    const auto eig = generalized_eigen(a, m);
    for (int k = 1; k <= n; ++k) {
        const double c = std::cos(k * M_PI * h);
        const double exact = 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
        CHECK(eig.values[k - 1] == doctest::Approx(exact).epsilon(1e-9));
    }
    SUBCASE("vectors are M-orthonormal") {
        for (int j = 0; j < 5; ++j)
            for (int k = j; k < 5; ++k) {
                std::vector<double> vj(n), vk(n);
                for (int i = 0; i < n; ++i) {
                    vj[i] = eig.vectors(i, j);
                    vk[i] = eig.vectors(i, k);
                }
                const auto mv = tridiag_matvec(m, vk);
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += vj[i] * mv[i];
                CHECK(dot == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-10));
            }
    }
}

TEST_CASE("cholesky and tridiagonal solves") {
    const int n = 20;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix b = random_symmetric(n, 9);
    Matrix spd(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double acc = (i == j) ? 1.0 : 0.0;
            for (int k = 0; k < n; ++k) acc += b(k, i) * b(k, j);
            spd(i, j) = acc;
        }
    std::vector<double> rhs(n);
    for (auto& v : rhs) v = gauss(rng);
    const auto x = cholesky_solve(spd, rhs);
    const auto ax = matvec(spd, x);
    for (int i = 0; i < n; ++i) CHECK(ax[i] == doctest::Approx(rhs[i]).epsilon(1e-9));

    const auto m = mass_tridiag(n, 0.05);
    const auto y = tridiag_solve(m, rhs);
    const auto my = tridiag_matvec(m, y);
    for (int i = 0; i < n; ++i) CHECK(my[i] == doctest::Approx(rhs[i]).epsilon(1e-10));
}
