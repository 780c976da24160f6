#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "adago/linalg/matrix.hpp"
#include "adago/models/param_set.hpp"

namespace adago::models {

enum class Architecture { linear, mlp };
enum class Activation { gelu, identity };
enum class LossKind { mse, cross_entropy };

/// mean: averaged over batch·outputs (mse) or batch (cross-entropy).
/// half_sum: ½·Σⱼ‖W xⱼ − yⱼ‖², the least-squares form whose gradient is
/// exactly (W − W★)XXᵀ.
enum class Reduction { mean, half_sum };

struct ModelSpec {
    Architecture architecture = Architecture::mlp;
    std::size_t d_in = 1;
    std::size_t hidden = 1; // unused for linear
    std::size_t d_out = 1;
    Activation activation = Activation::gelu;
    LossKind loss = LossKind::mse;
    Reduction reduction = Reduction::mean;

    /// W ∈ ℝ^{m×d}, no bias, half-sum squared loss.
    static ModelSpec linear(std::size_t m, std::size_t d);
    /// Two-layer MLP x → act(W1 x + b1) → W2 · + b2.
    static ModelSpec mlp(std::size_t d_in, std::size_t hidden, std::size_t d_out,
                         LossKind loss = LossKind::mse, Activation act = Activation::gelu);

    void validate() const;
};

/// One minibatch. Rows are samples. Regression uses `targets`, classification
/// uses `labels`. `weight` multiplies the loss; minibatches of a half-sum
/// objective set it to N/b so the stochastic gradient stays unbiased.
struct Batch {
    Matrix inputs;
    Matrix targets;
    std::vector<int> labels;
    double weight = 1.0;

    std::size_t size() const noexcept { return inputs.rows(); }
};

struct ForwardCache {
    std::uint64_t revision = 0;
    Matrix inputs;
    Matrix pre_activation; // mlp only
    Matrix activation;     // mlp only
    Matrix output_grad;    // ∂loss/∂output
};

struct ForwardResult {
    double loss = 0.0;
    Matrix output;
    ForwardCache cache;
};

ParamSet init_params(const ModelSpec& spec, std::uint64_t seed);

ForwardResult forward(const ModelSpec& spec, const ParamSet& params, const Batch& batch);

/// Writes gradients into params. Throws ContractViolation if params changed
/// since the forward pass that produced `cache`.
void backward(const ModelSpec& spec, ParamSet& params, const ForwardCache& cache);

/// forward + backward; returns the loss.
double loss_and_grad(const ModelSpec& spec, ParamSet& params, const Batch& batch);

double loss_only(const ModelSpec& spec, const ParamSet& params, const Batch& batch);

/// Central differences with per-coordinate step h·(1 + |θ|). Returns one
/// gradient matrix per parameter; `params` is left unchanged.
std::vector<Matrix> finite_difference_gradient(const ModelSpec& spec, const ParamSet& params,
                                               const Batch& batch, double h);

/// Single central-difference coordinate; restores the entry before returning.
double central_difference(const ModelSpec& spec, ParamSet& params, const Batch& batch,
                          std::size_t param, std::size_t entry, double h);

struct GradientCheck {
    double max_relative_error = 0.0;
    std::size_t probes = 0;
};

/// Compares backward() against central differences on `probes` random
/// (parameter, entry) coordinates. Relative error is |a − b| / max(|a|, |b|, floor);
/// the floor keeps entries near central-difference rounding noise (≈ ε·loss/h ~ 1e-10)
/// from dominating, so tiny entries are held to an absolute error of 1e-5·floor.
GradientCheck gradient_check(const ModelSpec& spec, const ParamSet& params, const Batch& batch,
                             std::size_t probes, std::uint64_t seed, double h = 1e-6,
                             double floor = 1e-4);

} // namespace adago::models
