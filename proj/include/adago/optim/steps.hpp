#pragma once

#include <cstdint>

#include "adago/linalg/matrix.hpp"
#include "adago/optim/config.hpp"

namespace adago::optim {

using linalg::Matrix;

/// Per-step telemetry. `accum_increment` is min(‖G_t‖², γ²) for AdaGO and
/// ‖G_t‖² for AdaGrad-Norm; zero for rules without an accumulator.
struct StepReport {
    double stepsize = 0.0;
    double grad_norm_f = 0.0;
    double update_norm_f = 0.0;
    double v_after = 0.0;
    double accum_increment = 0.0;
    bool clamped = false;
    bool floored = false;
};

struct AdaGOState {
    Matrix momentum;
    double v_sq = 1.0; // v_t², starts at v₀²
    std::int64_t step_count = 0;

    static AdaGOState init(std::size_t rows, std::size_t cols, const OptimizerConfig& cfg);
};

struct MuonState {
    Matrix momentum;
    std::int64_t step_count = 0;

    static MuonState init(std::size_t rows, std::size_t cols);
};

struct AdamState {
    Matrix m1;
    Matrix m2;
    std::int64_t step_count = 0;

    static AdamState init(std::size_t rows, std::size_t cols);
};

struct AdaGradNormState {
    double v_sq = 1.0;
    std::int64_t step_count = 0;

    static AdaGradNormState init(const OptimizerConfig& cfg);
};

/// μ·M + (1 − μ)·G
Matrix momentum_update(const Matrix& momentum, const Matrix& grad, double mu);

double grad_norm(const Matrix& grad, GradNorm norm);

struct AdaGOStepsize {
    double alpha = 0.0;
    double v_new_sq = 0.0;
    bool clamped = false;
    bool floored = false;
};

/// v_t² = v_{t−1}² + min(‖G_t‖², γ²);  α_t = max(ε, η·min(‖G_t‖, γ)/v_t).
/// `floored` is set when the ε branch attains the max.
AdaGOStepsize adago_stepsize(double grad_norm, double v_prev_sq, const OptimizerConfig& cfg);

/// One AdaGO iteration on a single matrix parameter: momentum, clamped
/// accumulator, orthogonalized momentum scaled by α_t. If the momentum is
/// exactly zero the parameter is left unchanged (Orth is undefined there) and
/// the report carries stepsize ε, floored = true.
StepReport adago_step(Matrix& param, const Matrix& grad, AdaGOState& state, const OptimizerConfig& cfg);

/// Muon: Θ ← Θ − η·Orth(μM + (1 − μ)G). Zero momentum skips the update.
StepReport muon_step(Matrix& param, const Matrix& grad, MuonState& state, const OptimizerConfig& cfg);

/// Θ ← Θ − η·Orth(G); zero G skips. ns_iters as in OptimizerConfig.
StepReport ogd_step(Matrix& param, const Matrix& grad, double eta, int ns_iters = 0);

/// Θ ← Θ − η·G
StepReport gd_step(Matrix& param, const Matrix& grad, double eta);

/// Bias-corrected Adam with adam_eps added to √v̂.
StepReport adam_step(Matrix& param, const Matrix& grad, AdamState& state, const OptimizerConfig& cfg,
                     double eta);

/// v² += ‖G‖_F²;  Θ ← Θ − η·G/v.
StepReport adagrad_norm_step(Matrix& param, const Matrix& grad, AdaGradNormState& state,
                             const OptimizerConfig& cfg);

} // namespace adago::optim
