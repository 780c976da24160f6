#include "adago/data/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "adago/errors.hpp"
#include "adago/linalg/kernels.hpp"
#include "adago/linalg/svd.hpp"

namespace adago::data {
namespace {

Matrix normal_matrix(std::size_t rows, std::size_t cols, double sd, CounterRng& rng) {
    std::normal_distribution<double> normal(0.0, sd);
    Matrix m(rows, cols);
    for (double& x : m.data()) x = normal(rng);
    return m;
}

models::Batch take_rows(const Matrix& x, const Matrix& y, std::size_t begin, std::size_t end) {
    models::Batch b;
    b.inputs = Matrix(end - begin, x.cols());
    b.targets = Matrix(end - begin, y.cols());
    for (std::size_t i = begin; i < end; ++i) {
        std::copy(x.row(i).begin(), x.row(i).end(), b.inputs.row(i - begin).begin());
        std::copy(y.row(i).begin(), y.row(i).end(), b.targets.row(i - begin).begin());
    }
    return b;
}

} // namespace

RandomFourierField RandomFourierField::sample(std::size_t d_in, std::size_t d_out, std::size_t n_features,
                                              double lengthscale, CounterRng& rng) {
    if (d_in == 0 || d_out == 0 || n_features == 0 || !(lengthscale > 0.0))
        throw InvalidInput("RandomFourierField: dimensions and lengthscale must be positive");
    RandomFourierField f;
    f.frequencies_ = normal_matrix(n_features, d_in, 1.0 / lengthscale, rng);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    f.phases_ = Matrix(1, n_features);
    for (double& b : f.phases_.data()) b = phase(rng);
    f.weights_ = normal_matrix(d_out, n_features, 1.0, rng);
    return f;
}

Matrix RandomFourierField::evaluate(const Matrix& x) const {
    if (x.cols() != d_in()) throw InvalidInput("RandomFourierField::evaluate: input width mismatch");
    Matrix features = linalg::matmul_nt(x, frequencies_); // n × F
    const double scale = std::sqrt(2.0 / static_cast<double>(phases_.cols()));
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto row = features.row(i);
        for (std::size_t f = 0; f < row.size(); ++f) row[f] = scale * std::cos(row[f] + phases_(0, f));
    }
    return linalg::matmul_nt(features, weights_);
}

SplitDataset generate_grf(const DatasetSpec& spec) {
    spec.validate();
    if (spec.kind != DatasetKind::grf_regression) throw InvalidInput("generate_grf: wrong dataset kind");
    CounterRng data_rng(spec.seed, Stream::data);
    CounterRng feature_rng(spec.seed, Stream::features);
    const Matrix x = normal_matrix(spec.n_samples, spec.d_in, 1.0, data_rng);
    const auto field = RandomFourierField::sample(spec.d_in, spec.d_out, spec.n_features, spec.lengthscale(),
                                                  feature_rng);
    const Matrix y = field.evaluate(x);
    const std::size_t n_train = spec.n_train();
    return {take_rows(x, y, 0, n_train), take_rows(x, y, n_train, spec.n_samples), spec};
}

LinearProblem generate_linear(const DatasetSpec& spec) {
    spec.validate();
    if (spec.kind != DatasetKind::linear_regression) throw InvalidInput("generate_linear: wrong dataset kind");
    if (spec.n_samples < spec.d_in)
        throw InvalidInput("generate_linear: need at least d_in training points for full-rank XXᵀ");
    constexpr int kMaxAttempts = 8;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        CounterRng data_rng(spec.seed, Stream::data, attempt);
        CounterRng feature_rng(spec.seed, Stream::features, attempt);
        const std::size_t n_total = spec.n_samples + spec.n_test();
        const Matrix x = normal_matrix(n_total, spec.d_in, 1.0, data_rng);
        const Matrix train_x = take_rows(x, x, 0, spec.n_samples).inputs;
        const auto svd = linalg::svd_reduced(train_x);
        if (svd.rank() < spec.d_in || svd.sigma.back() <= 1e-8) continue;

        LinearProblem p;
        p.w_star = normal_matrix(spec.d_out, spec.d_in, 1.0 / std::sqrt(static_cast<double>(spec.d_in)), feature_rng);
        const Matrix y = linalg::matmul_nt(x, p.w_star);
        p.data = {take_rows(x, y, 0, spec.n_samples), take_rows(x, y, spec.n_samples, n_total), spec};
        p.design = p.data.train.inputs.transposed();
        return p;
    }
    throw NumericFailure("generate_linear: could not draw a full-rank design");
}

SplitDataset generate_blobs(const DatasetSpec& spec) {
    spec.validate();
    if (spec.kind != DatasetKind::gaussian_blobs) throw InvalidInput("generate_blobs: wrong dataset kind");
    if (spec.d_out < 2) throw InvalidInput("generate_blobs: need at least two classes");
    CounterRng data_rng(spec.seed, Stream::data);
    CounterRng feature_rng(spec.seed, Stream::features);
    const Matrix centers = normal_matrix(spec.d_out, spec.d_in, spec.blob_separation, feature_rng);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(spec.d_out) - 1);
    std::normal_distribution<double> noise(0.0, 1.0);

    SplitDataset ds;
    ds.spec = spec;
    const std::size_t n_train = spec.n_train();
    ds.train.inputs = Matrix(n_train, spec.d_in);
    ds.test.inputs = Matrix(spec.n_samples - n_train, spec.d_in);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        const int label = pick(data_rng);
        models::Batch& dst = i < n_train ? ds.train : ds.test;
        auto row = dst.inputs.row(i < n_train ? i : i - n_train);
        for (std::size_t j = 0; j < spec.d_in; ++j) row[j] = centers(label, j) + noise(data_rng);
        dst.labels.push_back(label);
    }
    return ds;
}

SplitDataset generate(const DatasetSpec& spec) {
    switch (spec.kind) {
    case DatasetKind::grf_regression: return generate_grf(spec);
    case DatasetKind::linear_regression: return generate_linear(spec).data;
    case DatasetKind::gaussian_blobs: return generate_blobs(spec);
    }
    throw InvalidInput("generate: unknown dataset kind");
}

} // namespace adago::data
