#include "adago/diagnostics/noise.hpp"

#include <cmath>

#include "adago/data/sampler.hpp"
#include "adago/errors.hpp"
#include "adago/linalg/matrix.hpp"

namespace adago::diagnostics {

NoiseEstimate noise_variance_estimate(const models::ModelSpec& spec, const models::ParamSet& params,
                                      const models::Batch& train, std::size_t b, std::size_t n_draws,
                                      std::uint64_t seed) {
    if (b == 0 || b > train.size()) throw InvalidInput("noise_variance_estimate: need 1 ≤ b ≤ dataset size");
    if (n_draws < 2) throw InvalidInput("noise_variance_estimate: need at least two draws");
    models::ParamSet scratch = params;
    models::loss_and_grad(spec, scratch, train);
    const auto full = scratch.grads();
    const bool unbias = spec.reduction == models::Reduction::half_sum;
    const auto schedule = data::BatchSchedule::constant(b);

    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n_draws; ++i) {
        const auto batch = data::sample_minibatch(train, schedule, seed, i + 1, unbias);
        models::loss_and_grad(spec, scratch, batch);
        double err = 0.0;
        for (std::size_t k = 0; k < full.size(); ++k) {
            const auto diff = scratch[k].grad - full[k];
            err += linalg::inner(diff, diff);
        }
        sum += err;
        sum_sq += err * err;
    }
    const double n = static_cast<double>(n_draws);
    NoiseEstimate est;
    est.draws = n_draws;
    est.mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
    est.std_error = std::sqrt(var / n);
    return est;
}

} // namespace adago::diagnostics
