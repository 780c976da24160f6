#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "doctest.h"

#include "adago/data/generators.hpp"
#include "adago/diagnostics/contraction.hpp"
#include "adago/diagnostics/lemmas.hpp"
#include "adago/diagnostics/noise.hpp"
#include "adago/diagnostics/rate.hpp"
#include "adago/diagnostics/trajectory.hpp"
#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/norms.hpp"
#include "adago/linalg/orthogonalize.hpp"
#include "adago/optim/steps.hpp"
#include "support/random_matrices.hpp"

using namespace adago;
using namespace adago::diagnostics;
using adago::testing::gaussian;
using linalg::Matrix;

namespace {

data::LinearProblem small_linear(std::uint64_t seed, std::size_t m = 10, std::size_t d = 20, std::size_t j = 200) {
    data::DatasetSpec s;
    s.kind = data::DatasetKind::linear_regression;
    s.n_samples = j;
    s.d_in = d;
    s.d_out = m;
    s.seed = seed;
    return data::generate_linear(s);
}

// Eigenvalues of the symmetric matrix XXᵀ, descending; independent of the library SVD.
std::vector<double> gram_eigenvalues(const Matrix& x) {
    Eigen::MatrixXd e(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) e(i, k) = x(i, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e * e.transpose());
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + x.rows());
    std::sort(out.rbegin(), out.rend());
    return out;
}

Matrix full_gradient(const Matrix& w, const data::LinearProblem& p) {
    return linalg::matmul(w - p.w_star, linalg::matmul_nt(p.design, p.design));
}

} // namespace

TEST_SUITE("log-sum lemma") {
    TEST_CASE("constant sequence of length ten") {
        const std::vector<double> a(10, 1.0);
        const auto c = log_sum_bound_check(a);
        CHECK(c.lhs == doctest::Approx(2.9289682539682538).epsilon(1e-15));
        CHECK(c.rhs == doctest::Approx(1.0 + std::log(10.0)).epsilon(1e-15));
        CHECK(c.holds);
    }

    TEST_CASE("single term is tight") {
        const std::vector<double> a{3.5};
        const auto c = log_sum_bound_check(a);
        CHECK(c.lhs == 1.0);
        CHECK(c.rhs == 1.0);
        CHECK(c.holds);
    }

    TEST_CASE("random nonnegative sequences") {
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<int> len(1, 400);
        std::exponential_distribution<double> expo(1.0);
        std::bernoulli_distribution zero(0.2);
        std::lognormal_distribution<double> heavy(0.0, 3.0);
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> a(static_cast<std::size_t>(len(rng)));
            for (auto& x : a) x = zero(rng) ? 0.0 : (trial % 2 ? heavy(rng) : expo(rng));
            a[0] = 1e-3 + expo(rng);
            REQUIRE(log_sum_bound_check(a).holds);
        }
    }

    TEST_CASE("invalid input") {
        CHECK_THROWS_AS(log_sum_bound_check(std::vector<double>{0.0, 1.0}), InvalidInput);
        CHECK_THROWS_AS(log_sum_bound_check(std::vector<double>{-1.0}), InvalidInput);
        CHECK_THROWS_AS(log_sum_bound_check(std::vector<double>{1.0, -0.5}), InvalidInput);
        CHECK_THROWS_AS(log_sum_bound_check(std::vector<double>{}), InvalidInput);
    }
}

TEST_SUITE("block norms") {
    TEST_CASE("block diagonal semantics") {
        const std::vector<Matrix> blocks{Matrix{{3.0, 0.0}, {0.0, 1.0}}, Matrix{{0.0, 2.0}}};
        CHECK(block_spectral_norm(blocks) == doctest::Approx(3.0));
        CHECK(block_nuclear_norm(blocks) == doctest::Approx(6.0));
        CHECK(block_frobenius_norm(blocks) == doctest::Approx(std::sqrt(14.0)));
    }
}

TEST_SUITE("descent lemma") {
    const auto spec = models::ModelSpec::linear(10, 20);

    TEST_CASE("zero step is an equality") {
        const auto p = small_linear(1);
        auto params = models::init_params(spec, 3);
        const auto dir = random_direction(params.values(), 0, 0);
        const auto c = descent_lemma_check(spec, params, p.data.train, dir, 0.0, 1.0);
        CHECK(c.lhs == c.rhs);
        CHECK(c.holds);
    }

    TEST_CASE("linear model, Euclidean geometry with L = ||XX^T||") {
        const auto p = small_linear(2);
        const double l = gram_eigenvalues(p.design).front();
        auto params = models::init_params(spec, 4);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> step(-2.0, 2.0);
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto dir = random_direction(params.values(), 7, i);
            const auto c = descent_lemma_check(spec, params, p.data.train, dir, step(rng), l, Geometry::frobenius);
            REQUIRE(c.holds);
        }
    }

    TEST_CASE("linear model, spectral geometry needs the Ky Fan constant") {
        const auto p = small_linear(3);
        const auto eig = gram_eigenvalues(p.design);
        // sup over ‖D‖₂ ≤ 1 of ‖D·XXᵀ‖_* is the sum of the m largest eigenvalues.
        const double ky_fan = std::accumulate(eig.begin(), eig.begin() + 10, 0.0);
        auto params = models::init_params(spec, 4);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> step(-2.0, 2.0);
        for (std::uint64_t i = 0; i < 200; ++i) {
            const auto dir = random_direction(params.values(), 8, i);
            REQUIRE(descent_lemma_check(spec, params, p.data.train, dir, step(rng), ky_fan).holds);
        }

        // A direction with all singular values equal along the top eigenvectors
        // shows that ‖XXᵀ‖₂ alone is not a spectral-geometry constant.
        Eigen::MatrixXd e(20, 200);
        for (std::size_t i = 0; i < 20; ++i)
            for (std::size_t k = 0; k < 200; ++k) e(i, k) = p.design(i, k);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(e * e.transpose());
        Matrix d(10, 20);
        for (std::size_t r = 0; r < 10; ++r)
            for (std::size_t c = 0; c < 20; ++c) d(r, c) = solver.eigenvectors()(c, 19 - r);
        const std::vector<Matrix> dir{d};
        CHECK_FALSE(descent_lemma_check(spec, params, p.data.train, dir, 1.0, eig.front()).holds);
        CHECK(descent_lemma_check(spec, params, p.data.train, dir, 1.0, ky_fan).holds);
    }

    TEST_CASE("mlp with 1.5x the empirical constant") {
        const auto mspec = models::ModelSpec::mlp(6, 16, 3);
        std::mt19937_64 rng(11);
        models::Batch batch;
        batch.inputs = gaussian(64, 6, rng);
        batch.targets = gaussian(64, 3, rng);
        const auto params = models::init_params(mspec, 2);
        const double radius = 0.5;
        const double l_hat = estimate_smoothness(mspec, params, batch, {200, radius, 13});
        REQUIRE(l_hat > 0.0);

        auto probe_params = params;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int holds = 0;
        const int probes = 300;
        for (int i = 0; i < probes; ++i) {
            const auto shift = random_direction(params.values(), 21, 2 * i);
            auto values = params.values();
            const double r = radius * unit(rng);
            for (std::size_t k = 0; k < values.size(); ++k) values[k].add_scaled(shift[k], r);
            probe_params.set_values(values);
            const auto dir = random_direction(values, 21, 2 * i + 1);
            const double step = radius * unit(rng);
            holds += descent_lemma_check(mspec, probe_params, batch, dir, step, 1.5 * l_hat).holds;
        }
        CHECK(holds >= static_cast<int>(0.99 * probes));
    }
}

TEST_SUITE("contraction") {
    TEST_CASE("identity design") {
        CHECK(contraction_factor_gd(Matrix::identity(4), 0.5) == doctest::Approx(0.5));
        CHECK(contraction_factor_gd(Matrix::identity(4), 1.0) == 0.0);
    }

    TEST_CASE("optimal GD stepsize on a grid") {
        std::mt19937_64 rng(3);
        const Matrix x = gaussian(6, 40, rng);
        const auto eig = gram_eigenvalues(x);
        const double lmax = eig.front(), lmin = eig.back();
        const double eta_star = 2.0 / (lmax + lmin);
        double best_eta = 0.0, best = 1e300;
        for (int i = 1; i <= 2000; ++i) {
            const double eta = 2.0 * eta_star * i / 2000.0;
            const double f = contraction_factor_gd(x, eta);
            if (f < best) {
                best = f;
                best_eta = eta;
            }
        }
        CHECK(std::abs(best_eta - eta_star) <= 2.0 * eta_star / 2000.0);
        CHECK(contraction_factor_gd(x, eta_star) == doctest::Approx((lmax - lmin) / (lmax + lmin)).epsilon(1e-10));
        CHECK(contraction_factor_gd(x, eta_star) <= best + 1e-12);
    }

    TEST_CASE("GD run obeys the per-step bound") {
        const auto p = small_linear(4);
        const double eta = 1.0 / gram_eigenvalues(p.design).front();
        const double factor = contraction_factor_gd(p.design, eta);
        Matrix w(10, 20);
        for (int t = 0; t < 100; ++t) {
            const double before = linalg::frobenius_norm(w - p.w_star);
            optim::gd_step(w, full_gradient(w, p), eta);
            REQUIRE(linalg::frobenius_norm(w - p.w_star) <= factor * before + 1e-12);
        }
    }

    TEST_CASE("preconditioner eigenvalues lie in the singular value bracket") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 30; ++trial) {
            const std::size_t k = 1 + trial % 6;
            const Matrix g = testing::with_singular_values(6, 9, testing::geometric_spectrum(k, 1e3), rng);
            const auto pre = ogd_preconditioner(g);
            REQUIRE(pre.sigma.size() == k);
            for (double lambda : preconditioner_eigenvalues(pre)) {
                REQUIRE(lambda >= pre.sigma.back() * (1.0 - 1e-10));
                REQUIRE(lambda <= pre.sigma.front() * (1.0 + 1e-10));
            }
            const Matrix product = linalg::matmul(pre.p, pre.p_inv);
            REQUIRE(testing::max_abs_diff(product, Matrix::identity(9)) <= 1e-9);
        }
    }

    TEST_CASE("G P^-1 reproduces the exact orthogonalization") {
        std::mt19937_64 rng(8);
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix g = gaussian(7, 7, rng);
            const auto pre = ogd_preconditioner(g);
            const Matrix via_p = linalg::matmul(g, pre.p_inv);
            REQUIRE(testing::max_abs_diff(via_p, linalg::orthogonalize_exact(g)) <= 1e-9);
        }
    }

    TEST_CASE("OGD run obeys the per-step bound") {
        const auto p = small_linear(5);
        const double eta = 0.02;
        Matrix w(10, 20);
        for (int t = 0; t < 100; ++t) {
            const Matrix g = full_gradient(w, p);
            const double factor = contraction_factor_ogd(p.design, g, eta);
            const double before = linalg::frobenius_norm(w - p.w_star);
            optim::ogd_step(w, g, eta);
            REQUIRE(linalg::frobenius_norm(w - p.w_star) <= factor * before + 1e-10 * std::max(1.0, before));
        }
    }

    TEST_CASE("zero gradient") {
        CHECK_THROWS_AS(ogd_preconditioner(Matrix(3, 3)), DegenerateInput);
        CHECK_THROWS_AS(contraction_factor_ogd(Matrix::identity(3), Matrix(2, 3), 0.1), DegenerateInput);
    }
}

TEST_SUITE("rate fit") {
    TEST_CASE("exact power law") {
        std::vector<double> t, y;
        for (int i = 0; i <= 12; ++i) {
            t.push_back(std::pow(10.0, 2.0 + i / 6.0));
            y.push_back(3.0 / std::sqrt(t.back()));
        }
        const auto fit = fit_power_law(t, y);
        CHECK(std::abs(fit.slope + 0.5) <= 1e-6);
        CHECK(fit.intercept == doctest::Approx(std::log(3.0)));
        CHECK(fit.r_squared == doctest::Approx(1.0));
    }

    TEST_CASE("constant metric") {
        const std::vector<double> t{1, 10, 100, 1000}, y(4, 2.5);
        CHECK(std::abs(fit_power_law(t, y).slope) <= 1e-12);
    }

    TEST_CASE("nonpositive values are excluded") {
        const std::vector<double> t{1, 2, 4, 8, 16}, y{1.0, 0.0, 0.25, -1.0, 1.0 / 16};
        const auto fit = fit_power_law(t, y);
        CHECK(fit.excluded == 2);
        CHECK(fit.points == 3);
        CHECK(fit.slope == doctest::Approx(-1.0));
        CHECK_THROWS_AS(fit_power_law(std::vector<double>{1, 2}, std::vector<double>{0.0, 1.0}), InvalidInput);
    }

    TEST_CASE("trajectory with running average c T^-1/2") {
        Trajectory traj;
        auto avg = [](double t) { return 2.0 / std::sqrt(t); };
        for (std::uint64_t t = 1; t <= 10000; ++t) {
            StepRecord r;
            r.t = t;
            const double td = static_cast<double>(t);
            r.grad_norm_nuclear = td * avg(td) - (td - 1.0) * (t > 1 ? avg(td - 1.0) : 0.0);
            traj.append(r);
        }
        const auto fit = rate_slope_fit(traj, RateMetric::avg_nuclear_grad, {100, 10000, 20});
        CHECK(std::abs(fit.slope + 0.5) <= 1e-6);
        CHECK(fit.t_min == doctest::Approx(100.0));
        CHECK(fit.t_max == doctest::Approx(10000.0));
        CHECK(stationarity_metric(traj, RateMetric::min_nuclear_grad, 10000) > 0.0);
        CHECK_THROWS_AS(rate_slope_fit(traj, RateMetric::avg_nuclear_grad, {100, 10000, 5}), InvalidInput);
        CHECK_THROWS_AS(parse_rate_metric("median"), ConfigError);
    }
}

TEST_SUITE("noise") {
    data::DatasetSpec grf() {
        data::DatasetSpec s;
        s.n_samples = 2000;
        s.d_in = 20;
        s.d_out = 20;
        s.seed = 3;
        return s;
    }

    TEST_CASE("full batch has no noise") {
        const auto ds = data::generate_grf(grf());
        const auto spec = models::ModelSpec::mlp(20, 32, 20);
        const auto params = models::init_params(spec, 1);
        const auto est = noise_variance_estimate(spec, params, ds.train, ds.train.size(), 3, 0);
        CHECK(est.mean <= 1e-12);
    }

    TEST_CASE("variance halves when the batch doubles") {
        const auto ds = data::generate_grf(grf());
        const auto spec = models::ModelSpec::mlp(20, 32, 20);
        const auto params = models::init_params(spec, 1);
        const std::size_t b = 16;
        const double n = static_cast<double>(ds.train.size());
        const auto small = noise_variance_estimate(spec, params, ds.train, b, 400, 10);
        const auto large = noise_variance_estimate(spec, params, ds.train, 2 * b, 400, 11);
        const double ratio = small.mean / large.mean;
        // Sampling without replacement: Var ∝ (N − b)/(b(N − 1)).
        const double expected = 2.0 * (n - b) / (n - 2.0 * b);
        const double se = ratio * std::hypot(small.std_error / small.mean, large.std_error / large.mean);
        INFO("ratio=" << ratio << " expected=" << expected << " se=" << se);
        CHECK(std::abs(ratio - expected) <= 3.0 * se);
    }

    TEST_CASE("deterministic in the seed") {
        const auto ds = data::generate_grf(grf());
        const auto spec = models::ModelSpec::mlp(20, 8, 20);
        const auto params = models::init_params(spec, 1);
        const auto a = noise_variance_estimate(spec, params, ds.train, 8, 20, 4);
        const auto b = noise_variance_estimate(spec, params, ds.train, 8, 20, 4);
        CHECK(a.mean == b.mean);
        CHECK_THROWS_AS(noise_variance_estimate(spec, params, ds.train, 0, 20, 4), InvalidInput);
    }

    TEST_CASE("linear half-sum objective is unbiased with population weight") {
        const auto p = small_linear(6);
        const auto spec = models::ModelSpec::linear(10, 20);
        const auto params = models::init_params(spec, 2);
        const auto est = noise_variance_estimate(spec, params, p.data.train, 20, 100, 1);
        CHECK(est.mean > 0.0);
        CHECK(std::isfinite(est.mean));
    }
}

TEST_SUITE("trajectory") {
    TEST_CASE("csv round trip") {
        Trajectory traj;
        for (std::uint64_t t = 1; t <= 5; ++t) {
            StepRecord r;
            r.t = t;
            r.train_loss = 1.0 / 3.0 * static_cast<double>(t);
            if (t % 2) r.test_loss = 0.1 * static_cast<double>(t);
            r.grad_norm_f = 2.0;
            r.grad_norm_nuclear = 3.0;
            r.stepsize = 1e-3;
            r.v = static_cast<double>(t);
            r.accum_increment = 0.5;
            r.clamped = t == 2;
            r.floored = t == 3;
            r.wall_time = 0.25;
            traj.append(r);
        }
        std::stringstream buf;
        write_trajectory_csv(buf, traj);
        const auto back = read_trajectory_csv(buf);
        REQUIRE(back.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) {
            const auto& a = traj.records()[i];
            const auto& b = back.records()[i];
            CHECK(a.t == b.t);
            CHECK(a.train_loss == b.train_loss);
            CHECK(a.test_loss == b.test_loss);
            CHECK(a.clamped == b.clamped);
            CHECK(a.floored == b.floored);
            CHECK(a.v == b.v);
        }
    }

    TEST_CASE("ordering contracts") {
        Trajectory traj;
        StepRecord r;
        r.t = 2;
        traj.append(r);
        r.t = 2;
        CHECK_THROWS_AS(traj.append(r), ContractViolation);
        r.t = 3;
        r.v = -1.0;
        traj.append(r);
        CHECK_THROWS_AS(traj.validate(), ContractViolation);
    }

    TEST_CASE("bad csv") {
        std::stringstream bad("t,loss\n1,2\n");
        CHECK_THROWS_AS(read_trajectory_csv(bad), InvalidInput);
    }
}
