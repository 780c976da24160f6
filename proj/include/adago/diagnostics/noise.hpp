#pragma once

#include <cstddef>
#include <cstdint>

#include "adago/models/model.hpp"

namespace adago::diagnostics {

struct NoiseEstimate {
    double mean = 0.0;      // estimate of E‖G − ∇L‖_F²
    double std_error = 0.0; // of the mean
    std::size_t draws = 0;
};

/// Monte Carlo over `n_draws` minibatches of size b drawn without replacement
/// from `train`. Half-sum objectives use the N/b population weight so G is
/// unbiased in both reductions.
NoiseEstimate noise_variance_estimate(const models::ModelSpec& spec, const models::ParamSet& params,
                                      const models::Batch& train, std::size_t b, std::size_t n_draws,
                                      std::uint64_t seed);

} // namespace adago::diagnostics
