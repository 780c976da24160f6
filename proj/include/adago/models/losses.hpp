#pragma once

#include <span>

#include "adago/linalg/matrix.hpp"

namespace adago::models {

struct LossGrad {
    double loss = 0.0;
    linalg::Matrix grad; // w.r.t. the predictions/logits
};

/// Softmax cross-entropy averaged over rows; grad = (softmax − onehot)/batch.
LossGrad cross_entropy(const linalg::Matrix& logits, std::span<const int> labels);

/// Mean of squared errors over all entries.
LossGrad mse_mean(const linalg::Matrix& predictions, const linalg::Matrix& targets);

/// ½·Σ squared errors.
LossGrad mse_half_sum(const linalg::Matrix& predictions, const linalg::Matrix& targets);

} // namespace adago::models
