#include "adago/models/losses.hpp"

#include <algorithm>
#include <cmath>

#include "adago/errors.hpp"

namespace adago::models {

using linalg::Matrix;

LossGrad cross_entropy(const Matrix& logits, std::span<const int> labels) {
    const std::size_t n = logits.rows(), k = logits.cols();
    if (labels.size() != n) throw InvalidInput("cross_entropy: label count differs from batch size");
    if (n == 0) throw InvalidInput("cross_entropy: empty batch");
    LossGrad out{0.0, Matrix(n, k)};
    for (std::size_t i = 0; i < n; ++i) {
        const int label = labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= k)
            throw InvalidInput("cross_entropy: label out of range");
        auto row = logits.row(i);
        const double shift = *std::max_element(row.begin(), row.end());
        double denom = 0.0;
        for (double z : row) denom += std::exp(z - shift);
        const double log_denom = std::log(denom);
        out.loss += log_denom - (row[label] - shift);
        for (std::size_t j = 0; j < k; ++j) out.grad(i, j) = std::exp(row[j] - shift - log_denom);
        out.grad(i, label) -= 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    out.loss *= inv_n;
    out.grad *= inv_n;
    return out;
}

LossGrad mse_mean(const Matrix& predictions, const Matrix& targets) {
    linalg::require_same_shape(predictions, targets, "mse_mean");
    LossGrad out{0.0, predictions - targets};
    const double inv = 1.0 / static_cast<double>(predictions.size());
    for (double& r : out.grad.data()) {
        out.loss += r * r;
        r *= 2.0 * inv;
    }
    out.loss *= inv;
    return out;
}

LossGrad mse_half_sum(const Matrix& predictions, const Matrix& targets) {
    linalg::require_same_shape(predictions, targets, "mse_half_sum");
    LossGrad out{0.0, predictions - targets};
    for (double r : out.grad.data()) out.loss += r * r;
    out.loss *= 0.5;
    return out;
}

} // namespace adago::models
