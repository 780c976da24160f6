#pragma once

#include <string_view>

namespace adago::optim {

/// Matrix norm used for ‖G_t‖ in the AdaGO accumulator and stepsize.
enum class GradNorm { frobenius, spectral, nuclear };

GradNorm parse_grad_norm(std::string_view name);
std::string_view to_string(GradNorm norm);

/// Hyperparameters shared by all optimizers; each rule reads the fields it
/// needs. γ and v₀ enter the AdaGO rate only through log factors, so the
/// defaults are not critical.
struct OptimizerConfig {
    double eta = 1e-3;     // learning rate η
    double mu = 0.95;      // momentum μ ∈ [0, 1)
    double gamma = 1e3;    // clamp γ on ‖G_t‖
    double epsilon = 1e-6; // AdaGO stepsize floor ε
    double v0 = 1.0;       // accumulator init v₀
    double beta1 = 0.9;
    double beta2 = 0.95;
    double adam_eps = 1e-8;
    int ns_iters = 0;      // 0 ⇒ exact SVD orthogonalization
    double aux_eta = 1e-2; // Adam learning rate for vector/scalar params under hybrid rules
    GradNorm norm = GradNorm::frobenius;

    /// Throws ConfigError unless η, γ, ε, v₀ > 0, μ, β₁, β₂ ∈ [0, 1),
    /// adam_eps > 0, ns_iters ≥ 0.
    void validate() const;
};

} // namespace adago::optim
