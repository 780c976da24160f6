#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"

#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/norms.hpp"
#include "adago/linalg/orthogonalize.hpp"
#include "adago/linalg/svd.hpp"
#include "support/random_matrices.hpp"

using namespace adago;
using namespace adago::linalg;
using adago::testing::gaussian;
using adago::testing::max_abs_diff;

namespace {

double orthonormality_defect(const Matrix& q) {
    Matrix g = matmul_tn(q, q);
    g -= Matrix::identity(g.rows());
    return frobenius_norm(g);
}

Matrix rotation2(double theta, bool reflect) {
    const double c = std::cos(theta), s = std::sin(theta);
    if (reflect) return {{c, s}, {s, -c}};
    return {{c, -s}, {s, c}};
}

// Brute-force minimizer of ‖O − m‖_F over O(2), sampled on an angle grid.
Matrix brute_force_orth2(const Matrix& m, int steps) {
    Matrix best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int reflect = 0; reflect < 2; ++reflect)
        for (int i = 0; i < steps; ++i) {
            Matrix o = rotation2(2.0 * std::numbers::pi * i / steps, reflect == 1);
            const double d = frobenius_norm(o - m);
            if (d < best_dist) {
                best_dist = d;
                best = o;
            }
        }
    return best;
}

} // namespace

TEST_SUITE("matrix") {
    TEST_CASE("construction checks data length") {
        CHECK_THROWS_AS(Matrix(2, 2, std::vector<double>{1, 2, 3}), InvalidInput);
        CHECK_THROWS_AS(Matrix({{1, 2}, {3}}), InvalidInput);
    }

    TEST_CASE("parallel matmul is bit-identical to the serial reference") {
        std::mt19937_64 rng(7);
        for (auto [n, k, m] : {std::tuple{3, 4, 5}, {64, 48, 40}, {130, 70, 90}}) {
            Matrix a = gaussian(n, k, rng), b = gaussian(k, m, rng);
            CHECK(matmul(a, b) == serial::matmul(a, b));
        }
        CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), InvalidInput);
    }
}

TEST_SUITE("norms") {
    TEST_CASE("frobenius") {
        CHECK(frobenius_norm(Matrix(3, 2)) == 0.0);
        CHECK(frobenius_norm(Matrix::identity(3)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
        CHECK(frobenius_norm(Matrix{{3, 4}}) == 5.0);
        Matrix bad{{1.0, std::numeric_limits<double>::quiet_NaN()}};
        CHECK_THROWS_AS(frobenius_norm(bad), InvalidInput);
        bad(0, 1) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(spectral_norm(bad), InvalidInput);
        CHECK_THROWS_AS(nuclear_norm(bad), InvalidInput);
    }

    TEST_CASE("spectral") {
        const double d[] = {2.0, 5.0};
        CHECK(spectral_norm(Matrix::diagonal(d)) == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(spectral_norm(Matrix::identity(6)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(spectral_norm(Matrix(2, 3)) == 0.0);

        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            Matrix m = gaussian(4, 3, rng);
            const double oracle = svd_reduced(m).sigma.front();
            CHECK(spectral_norm(m) == doctest::Approx(oracle).epsilon(1e-9));
            Matrix w = m.transposed();
            CHECK(spectral_norm(w) == doctest::Approx(oracle).epsilon(1e-9));
        }
    }

    TEST_CASE("nuclear") {
        const double d[] = {2.0, 5.0};
        CHECK(nuclear_norm(Matrix::diagonal(d)) == doctest::Approx(7.0).epsilon(1e-13));
        CHECK(nuclear_norm(Matrix(3, 3)) == 0.0);

        Matrix a{{1.0}, {-2.0}, {2.0}};  // ‖a‖ = 3
        Matrix b{{3.0}, {4.0}};          // ‖b‖ = 5
        CHECK(nuclear_norm(matmul_nt(a, b)) == doctest::Approx(15.0).epsilon(1e-12));

        // Eigenvalue oracle: σᵢ = sqrt(λᵢ(mᵀm)) via Eigen's self-adjoint solver.
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            Matrix m = gaussian(3, 3, rng);
            Eigen::Matrix3d e;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) e(i, j) = m(i, j);
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(e.transpose() * e);
            const double oracle = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
            CHECK(nuclear_norm(m) == doctest::Approx(oracle).epsilon(1e-10));
        }
    }

    TEST_CASE("norm ordering spectral <= frobenius <= nuclear") {
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<int> dim(1, 12);
        for (int trial = 0; trial < 100; ++trial) {
            Matrix m = gaussian(dim(rng), dim(rng), rng);
            const double s = spectral_norm(m), f = frobenius_norm(m), n = nuclear_norm(m);
            CHECK(s <= f * (1 + 1e-12));
            CHECK(f <= n * (1 + 1e-12));
        }
    }
}

TEST_SUITE("svd") {
    TEST_CASE("rank-deficient diagonal") {
        const double d[] = {3.0, 0.0};
        auto svd = svd_reduced(Matrix::diagonal(d));
        REQUIRE(svd.rank() == 1);
        CHECK(svd.sigma[0] == 3.0);
        CHECK(svd.u == Matrix{{1.0}, {0.0}});
        CHECK(svd.v == Matrix{{1.0}, {0.0}});
    }

    TEST_CASE("orthogonal input has unit spectrum") {
        std::mt19937_64 rng(3);
        Matrix q = adago::testing::random_orthogonal(5, rng);
        auto svd = svd_reduced(q);
        REQUIRE(svd.rank() == 5);
        for (double s : svd.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    }

    TEST_CASE("reconstruction and orthonormal factors") {
        std::mt19937_64 rng(17);
        for (auto [r, c] : {std::pair{5, 3}, {3, 5}, {8, 8}, {40, 13}, {1, 6}}) {
            Matrix m = gaussian(r, c, rng);
            for (auto* impl : {&svd_reduced, &serial::svd_reduced}) {
                auto svd = (*impl)(m, {});
                CHECK(frobenius_norm(svd.reconstruct() - m) <= 1e-9 * frobenius_norm(m));
                CHECK(orthonormality_defect(svd.u) <= 1e-10);
                CHECK(orthonormality_defect(svd.v) <= 1e-10);
                for (std::size_t i = 1; i < svd.rank(); ++i) CHECK(svd.sigma[i] <= svd.sigma[i - 1]);
            }
        }
    }

    TEST_CASE("round-robin and cyclic orderings agree") {
        std::mt19937_64 rng(23);
        Matrix m = gaussian(70, 33, rng);
        auto a = svd_reduced(m);
        auto b = serial::svd_reduced(m);
        REQUIRE(a.rank() == b.rank());
        for (std::size_t i = 0; i < a.rank(); ++i) CHECK(a.sigma[i] == doctest::Approx(b.sigma[i]).epsilon(1e-12));
    }

    TEST_CASE("rank threshold drops negligible singular values") {
        std::mt19937_64 rng(29);
        Matrix m = adago::testing::with_singular_values(6, 4, {2.0, 1.0, 1e-14}, rng);
        CHECK(svd_reduced(m).rank() == 2);
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(svd_reduced(Matrix(3, 2)), DegenerateInput);
        std::mt19937_64 rng(31);
        JacobiOptions one_sweep;
        one_sweep.max_sweeps = 1;
        CHECK_THROWS_AS(svd_reduced(gaussian(10, 10, rng), one_sweep), NumericFailure);
        CHECK_THROWS_AS(serial::svd_reduced(gaussian(10, 10, rng), one_sweep), NumericFailure);
    }
}

TEST_SUITE("orthogonalize") {
    TEST_CASE("closed-form examples") {
        CHECK(max_abs_diff(orthogonalize_exact(Matrix::identity(2)), Matrix::identity(2)) <= 1e-15);
        const double d[] = {3.0, 5.0};
        CHECK(max_abs_diff(orthogonalize_exact(Matrix::diagonal(d)), Matrix::identity(2)) <= 1e-15);
        CHECK_THROWS_AS(orthogonalize_exact(Matrix(2, 2)), DegenerateInput);
        CHECK_THROWS_AS(orthogonalize_newton_schulz(Matrix(2, 2), 5), DegenerateInput);
    }

    TEST_CASE("skew 2x2 matches brute-force minimizer") {
        Matrix m{{0.0, 2.0}, {-2.0, 0.0}};
        Matrix expected{{0.0, 1.0}, {-1.0, 0.0}};
        // 0.01° grid; the true minimizer lies on the grid.
        CHECK(max_abs_diff(brute_force_orth2(m, 36000), expected) <= 1e-12);
        CHECK(max_abs_diff(orthogonalize_exact(m), expected) <= 1e-14);
    }

    TEST_CASE("beats every 1-degree grid sample on random 2x2") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 50; ++trial) {
            Matrix m = gaussian(2, 2, rng);
            const double d = frobenius_norm(orthogonalize_exact(m) - m);
            for (int reflect = 0; reflect < 2; ++reflect)
                for (int deg = 0; deg < 360; ++deg) {
                    Matrix o = rotation2(deg * std::numbers::pi / 180.0, reflect == 1);
                    CHECK(d <= frobenius_norm(o - m) + 1e-12);
                }
        }
    }

    TEST_CASE("orthonormal columns, orthogonal equivariance, scale invariance") {
        std::mt19937_64 rng(43);
        std::uniform_int_distribution<int> dim(1, 20);
        for (int trial = 0; trial < 40; ++trial) {
            int rows = dim(rng), cols = dim(rng);
            if (rows < cols) std::swap(rows, cols);
            Matrix m = gaussian(rows, cols, rng);
            Matrix o = orthogonalize_exact(m);
            CHECK(orthonormality_defect(o) <= 1e-10);
            // wide orientation: rows orthonormal
            CHECK(orthonormality_defect(orthogonalize_exact(m.transposed()).transposed()) <= 1e-10);

            Matrix p = adago::testing::random_orthogonal(rows, rng);
            CHECK(max_abs_diff(orthogonalize_exact(matmul(p, m)), matmul(p, o)) <= 1e-9);
            CHECK(max_abs_diff(orthogonalize_exact(m * 37.5), o) <= 1e-10);
            CHECK(max_abs_diff(orthogonalize_exact(m * 1e-3), o) <= 1e-10);
        }
    }

    TEST_CASE("Newton-Schulz") {
        CHECK(max_abs_diff(orthogonalize_newton_schulz(Matrix::identity(2), 30), Matrix::identity(2)) <= 1e-12);

        std::mt19937_64 rng(47);
        std::uniform_real_distribution<double> sv(1.0, 10.0);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> s{10.0, sv(rng), sv(rng), 1.0};
            std::sort(s.rbegin(), s.rend());
            Matrix m = adago::testing::with_singular_values(4, 4, s, rng);
            const double err = spectral_norm(orthogonalize_newton_schulz(m, 30) - orthogonalize_exact(m));
            CHECK(err <= 1e-6);
        }

        const double d[] = {1.0, 1e-8};
        Matrix ill = Matrix::diagonal(d);
        Matrix exact = orthogonalize_exact(ill);
        const double e5 = spectral_norm(orthogonalize_newton_schulz(ill, 5) - exact);
        const double e50 = spectral_norm(orthogonalize_newton_schulz(ill, 50) - exact);
        CHECK(e50 < e5);

        // dispatch
        CHECK(orthogonalize(ill, 0) == exact);
        CHECK_THROWS_AS(orthogonalize_newton_schulz(ill, 0), InvalidInput);
    }

    TEST_CASE("Newton-Schulz error is nonincreasing in iterations on tall inputs") {
        std::mt19937_64 rng(53);
        Matrix m = adago::testing::with_singular_values(12, 5, adago::testing::geometric_spectrum(5, 100.0), rng);
        Matrix exact = orthogonalize_exact(m);
        double prev = std::numeric_limits<double>::infinity();
        for (int iters : {1, 2, 4, 8, 16, 32}) {
            const double e = spectral_norm(orthogonalize_newton_schulz(m, iters) - exact);
            CHECK(e <= prev + 1e-14);
            prev = e;
        }
    }
}
