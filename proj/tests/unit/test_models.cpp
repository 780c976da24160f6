#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/norms.hpp"
#include "adago/models/activations.hpp"
#include "adago/models/losses.hpp"
#include "adago/models/model.hpp"
#include "support/random_matrices.hpp"

using namespace adago;
using namespace adago::models;
using adago::testing::gaussian;
using linalg::matmul_nt;
using linalg::matmul_tn;

namespace {

struct LinearFixture {
    Matrix inputs;  // J × d
    Matrix w_star;  // m × d
    Batch batch;
};

LinearFixture make_linear(std::size_t m, std::size_t d, std::size_t j, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    LinearFixture f;
    f.inputs = gaussian(j, d, rng);
    f.w_star = gaussian(m, d, rng);
    f.batch.inputs = f.inputs;
    f.batch.targets = matmul_nt(f.inputs, f.w_star);
    return f;
}

Batch regression_batch(std::size_t n, std::size_t d_in, std::size_t d_out, std::mt19937_64& rng) {
    Batch b;
    b.inputs = gaussian(n, d_in, rng);
    b.targets = gaussian(n, d_out, rng);
    return b;
}

Batch classification_batch(std::size_t n, std::size_t d_in, int classes, std::mt19937_64& rng) {
    Batch b;
    b.inputs = gaussian(n, d_in, rng);
    std::uniform_int_distribution<int> label(0, classes - 1);
    for (std::size_t i = 0; i < n; ++i) b.labels.push_back(label(rng));
    return b;
}

} // namespace

TEST_SUITE("activations") {
    TEST_CASE("gelu values") {
        CHECK(gelu(0.0) == 0.0);
        CHECK(std::abs(gelu(10.0) - 10.0) <= 1e-6);
        CHECK(std::abs(gelu(-10.0)) <= 1e-6);
    }

    TEST_CASE("gelu_prime matches central differences") {
        for (double x : {-3.0, -1.0, -0.2, 0.0, 0.5, 1.7, 4.0}) {
            const double h = 1e-5;
            const double fd = (gelu(x + h) - gelu(x - h)) / (2 * h);
            CHECK(std::abs(gelu_prime(x) - fd) <= 1e-8);
        }
    }
}

TEST_SUITE("losses") {
    TEST_CASE("cross entropy") {
        Matrix uniform(3, 4, 0.25);
        std::vector<int> labels{0, 3, 2};
        CHECK(cross_entropy(uniform, labels).loss == doctest::Approx(std::log(4.0)).epsilon(1e-14));

        Matrix confident{{1000.0, 0.0, 0.0}};
        std::vector<int> right{0};
        CHECK(cross_entropy(confident, right).loss <= 1e-12);
        std::vector<int> wrong{1};
        CHECK(std::isfinite(cross_entropy(confident, wrong).loss));

        std::vector<int> bad{5, 0, 0};
        CHECK_THROWS_AS(cross_entropy(uniform, bad), InvalidInput);

        std::mt19937_64 rng(2);
        Matrix logits = gaussian(5, 3, rng);
        std::vector<int> y{0, 1, 2, 1, 0};
        auto lg = cross_entropy(logits, y);
        for (std::size_t i = 0; i < logits.size(); ++i) {
            Matrix up = logits, down = logits;
            up.data()[i] += 1e-6;
            down.data()[i] -= 1e-6;
            const double fd = (cross_entropy(up, y).loss - cross_entropy(down, y).loss) / 2e-6;
            CHECK(std::abs(fd - lg.grad.data()[i]) <= 1e-8);
        }
    }

    TEST_CASE("losses are nonnegative") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 50; ++trial) {
            Matrix a = gaussian(4, 3, rng, 5.0), b = gaussian(4, 3, rng);
            CHECK(mse_mean(a, b).loss >= 0.0);
            CHECK(mse_half_sum(a, b).loss >= 0.0);
            std::vector<int> y{0, 2, 1, 1};
            CHECK(cross_entropy(a, y).loss >= 0.0);
        }
    }
}

TEST_SUITE("forward/backward") {
    TEST_CASE("forward examples") {
        auto f = make_linear(3, 4, 10, 1);
        auto spec = ModelSpec::linear(3, 4);
        ParamSet ps = init_params(spec, 0);
        ps.mutable_value(0) = f.w_star;
        CHECK(forward(spec, ps, f.batch).loss <= 1e-24);

        auto mlp = ModelSpec::mlp(3, 5, 2);
        ParamSet zero = init_params(mlp, 0);
        for (std::size_t i = 0; i < zero.size(); ++i) zero.mutable_value(i) *= 0.0;
        Batch b;
        b.inputs = Matrix{{1.0, -2.0, 0.5}, {0.3, 0.0, 1.0}};
        b.targets = Matrix(2, 2);
        CHECK(forward(mlp, zero, b).loss == 0.0);

        ParamSet w0 = init_params(ModelSpec::linear(2, 2), 0);
        w0.mutable_value(0) *= 0.0;
        Batch e1;
        e1.inputs = Matrix{{1.0, 0.0}};
        e1.targets = Matrix{{1.0, 0.0}};
        CHECK(forward(ModelSpec::linear(2, 2), w0, e1).loss == 0.5);
    }

    TEST_CASE("linear gradient equals (W - W*) X X^T") {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            auto f = make_linear(5, 7, 40, seed);
            auto spec = ModelSpec::linear(5, 7);
            ParamSet ps = init_params(spec, seed);
            loss_and_grad(spec, ps, f.batch);
            const Matrix xxt = matmul_tn(f.inputs, f.inputs); // X·Xᵀ with X = inputsᵀ (columns are samples)
            const Matrix closed = linalg::matmul(ps[0].value - f.w_star, xxt);
            CHECK(linalg::frobenius_norm(ps[0].grad - closed) <= 1e-12 * linalg::frobenius_norm(xxt));
        }
    }

    TEST_CASE("zero residual gives zero gradient") {
        auto f = make_linear(3, 4, 10, 9);
        auto spec = ModelSpec::linear(3, 4);
        ParamSet ps = init_params(spec, 0);
        ps.mutable_value(0) = f.w_star;
        loss_and_grad(spec, ps, f.batch);
        CHECK(linalg::frobenius_norm(ps[0].grad) <= 1e-12);
    }

    TEST_CASE("backward matches finite differences") {
        std::mt19937_64 rng(21);
        for (std::uint64_t draw = 0; draw < 20; ++draw) {
            auto lin = ModelSpec::linear(4, 6);
            auto f = make_linear(4, 6, 15, 100 + draw);
            CHECK(gradient_check(lin, init_params(lin, draw), f.batch, 20, draw).max_relative_error <= 1e-5);

            auto mlp = ModelSpec::mlp(5, 8, 3);
            CHECK(gradient_check(mlp, init_params(mlp, draw), regression_batch(12, 5, 3, rng), 20, draw)
                      .max_relative_error <= 1e-5);

            auto clf = ModelSpec::mlp(5, 8, 4, LossKind::cross_entropy);
            CHECK(gradient_check(clf, init_params(clf, draw), classification_batch(12, 5, 4, rng), 20, draw)
                      .max_relative_error <= 1e-5);

            auto id = ModelSpec::mlp(5, 8, 3, LossKind::mse, Activation::identity);
            CHECK(gradient_check(id, init_params(id, draw), regression_batch(12, 5, 3, rng), 20, draw)
                      .max_relative_error <= 1e-5);
        }
    }

    TEST_CASE("full finite-difference gradient") {
        // f(w) = w² at w = 3 via a 1×1 linear model: ½·2·(w·1 − 0)².
        auto spec = ModelSpec::linear(1, 1);
        ParamSet ps = init_params(spec, 0);
        ps.mutable_value(0)(0, 0) = 3.0;
        Batch b;
        b.inputs = Matrix{{1.0}};
        b.targets = Matrix{{0.0}};
        b.weight = 2.0;
        CHECK(std::abs(finite_difference_gradient(spec, ps, b, 1e-6)[0](0, 0) - 6.0) <= 1e-9);

        // Quadratic loss: central differences agree with the closed form to rounding.
        auto f = make_linear(3, 4, 20, 5);
        auto lin = ModelSpec::linear(3, 4);
        ParamSet w = init_params(lin, 1);
        const Matrix fd = finite_difference_gradient(lin, w, f.batch, 1e-5)[0];
        loss_and_grad(lin, w, f.batch);
        CHECK(linalg::frobenius_norm(fd - w[0].grad) <= 1e-6 * linalg::frobenius_norm(w[0].grad));

        // Non-quadratic loss: halving h cuts the truncation error by ~4.
        std::mt19937_64 rng(8);
        auto mlp = ModelSpec::mlp(3, 4, 2);
        ParamSet p = init_params(mlp, 3);
        for (std::size_t i = 0; i < p.size(); ++i) p.mutable_value(i) *= 3.0;
        Batch rb = regression_batch(6, 3, 2, rng);
        ParamSet g = p;
        loss_and_grad(mlp, g, rb);
        auto err = [&](double h) {
            auto fdg = finite_difference_gradient(mlp, p, rb, h);
            double e = 0.0;
            for (std::size_t i = 0; i < fdg.size(); ++i) e += linalg::frobenius_norm(fdg[i] - g[i].grad);
            return e;
        };
        const double ratio = err(2e-3) / err(1e-3);
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }

    TEST_CASE("contract and shape errors") {
        auto spec = ModelSpec::mlp(3, 4, 2);
        ParamSet ps = init_params(spec, 0);
        std::mt19937_64 rng(1);
        Batch b = regression_batch(5, 3, 2, rng);
        auto r = forward(spec, ps, b);
        ps.mutable_value(0)(0, 0) += 1.0;
        CHECK_THROWS_AS(backward(spec, ps, r.cache), ContractViolation);

        Batch wrong = regression_batch(5, 4, 2, rng);
        CHECK_THROWS_AS(forward(spec, ps, wrong), InvalidInput);
        Batch bad_targets = regression_batch(5, 3, 3, rng);
        CHECK_THROWS_AS(forward(spec, ps, bad_targets), InvalidInput);
        CHECK_THROWS_AS(finite_difference_gradient(spec, ps, b, 0.0), InvalidInput);
        CHECK_THROWS_AS(ModelSpec::mlp(0, 4, 2).validate(), InvalidInput);
    }

    TEST_CASE("mlp parameters are tagged for hybrid routing") {
        ParamSet ps = init_params(ModelSpec::mlp(3, 4, 2), 0);
        CHECK(ps.at("W1").kind == ParamKind::matrix);
        CHECK(ps.at("W2").kind == ParamKind::matrix);
        CHECK(ps.at("b1").kind == ParamKind::vector);
        CHECK(ps.at("b2").kind == ParamKind::vector);
        CHECK(init_params(ModelSpec::mlp(3, 4, 2), 0).values() == ps.values());
        CHECK(init_params(ModelSpec::mlp(3, 4, 2), 1).values() != ps.values());
    }
}
