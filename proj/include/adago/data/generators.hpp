#pragma once

#include <cstddef>

#include "adago/data/dataset.hpp"
#include "adago/data/rng.hpp"

namespace adago::data {

/// One draw of a vector-valued Gaussian random field with RBF kernel
/// exp(−‖x − x′‖²/2ℓ²), approximated by F random Fourier features shared across
/// outputs: y_k(x) = √(2/F)·Σ_f w_kf·cos(ω_fᵀx + b_f), ω ~ N(0, I/ℓ²),
/// b ~ U[0, 2π), w ~ N(0, 1).
class RandomFourierField {
public:
    static RandomFourierField sample(std::size_t d_in, std::size_t d_out, std::size_t n_features,
                                     double lengthscale, CounterRng& rng);

    /// Rows of `x` are points; returns rows × d_out.
    Matrix evaluate(const Matrix& x) const;

    std::size_t d_in() const noexcept { return frequencies_.cols(); }
    std::size_t d_out() const noexcept { return weights_.rows(); }

private:
    Matrix frequencies_; // F × d_in
    Matrix phases_;      // 1 × F
    Matrix weights_;     // d_out × F
};

/// x ~ N(0, I), y = GRF draw at x. Deterministic in spec.seed.
SplitDataset generate_grf(const DatasetSpec& spec);

/// Realizable least squares: x ~ N(0, I_d), W★ entries ~ N(0, 1/d), y = W★x.
struct LinearProblem {
    SplitDataset data;
    Matrix w_star; // d_out × d_in
    Matrix design; // d_in × J, columns are training inputs (X with XXᵀ full rank)
};

/// Retries with fresh draws (bounded) until σ_min(X) > 1e-8.
LinearProblem generate_linear(const DatasetSpec& spec);

/// Gaussian class blobs: centers ~ N(0, separation²·I), points = center + N(0, I).
SplitDataset generate_blobs(const DatasetSpec& spec);

/// Dispatch on spec.kind.
SplitDataset generate(const DatasetSpec& spec);

} // namespace adago::data
