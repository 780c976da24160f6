#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adago/linalg/matrix.hpp"
#include "adago/models/model.hpp"

namespace adago::diagnostics {

using linalg::Matrix;

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// Σ_t a_t/S_t against ln(S_T/a₁) + 1 with S_t = a₁ + … + a_t.
/// Requires a₁ > 0 and a_t ≥ 0; holds = lhs ≤ rhs + 1e-12.
BoundCheck log_sum_bound_check(std::span<const double> a);

/// Norms over a list of parameter blocks treated as one block-diagonal matrix:
/// spectral is the max over blocks, nuclear the sum.
double block_spectral_norm(std::span<const Matrix> blocks);
double block_nuclear_norm(std::span<const Matrix> blocks);
double block_frobenius_norm(std::span<const Matrix> blocks);

/// Which norm measures ‖Θ′ − Θ‖ in the quadratic term.
enum class Geometry { spectral, frobenius };

/// L(Θ′) ≤ L(Θ) + ⟨∇L(Θ), Θ′−Θ⟩ + (L/2)‖Θ′−Θ‖² for Θ′ = Θ + step·direction.
/// holds = lhs ≤ rhs + tolerance·max(1, |L(Θ)|).
BoundCheck descent_lemma_check(const models::ModelSpec& spec, const models::ParamSet& params,
                               const models::Batch& batch, std::span<const Matrix> direction, double step,
                               double lipschitz, Geometry geometry = Geometry::spectral,
                               double tolerance = 1e-12);

struct SmoothnessProbe {
    std::size_t pairs = 200;
    double radius = 1.0; // ball around the given parameters, in block spectral norm
    std::uint64_t seed = 0;
};

/// Empirical L̂ = max over random pairs in the ball of
/// ‖∇L(Θ) − ∇L(Θ′)‖_* / ‖Θ − Θ′‖₂ (block norms). Diagnostic only.
double estimate_smoothness(const models::ModelSpec& spec, const models::ParamSet& params,
                           const models::Batch& batch, const SmoothnessProbe& probe = {});

/// Gaussian blocks with the shapes of `like`, rescaled to unit block spectral norm.
std::vector<Matrix> random_direction(std::span<const Matrix> like, std::uint64_t seed, std::uint64_t substream);

} // namespace adago::diagnostics
