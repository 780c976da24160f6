#include "adago/optim/steps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adago/errors.hpp"
#include "adago/linalg/norms.hpp"
#include "adago/linalg/orthogonalize.hpp"

namespace adago::optim {

using linalg::frobenius_norm;

GradNorm parse_grad_norm(std::string_view name) {
    if (name == "frobenius") return GradNorm::frobenius;
    if (name == "spectral") return GradNorm::spectral;
    if (name == "nuclear") return GradNorm::nuclear;
    throw ConfigError("unknown gradient norm '" + std::string(name) + "'");
}

std::string_view to_string(GradNorm norm) {
    switch (norm) {
    case GradNorm::spectral: return "spectral";
    case GradNorm::nuclear: return "nuclear";
    case GradNorm::frobenius: break;
    }
    return "frobenius";
}

void OptimizerConfig::validate() const {
    auto positive = [](double x, const char* what) {
        if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(std::string(what) + " must be positive");
    };
    auto unit = [](double x, const char* what) {
        if (!(x >= 0.0 && x < 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1)");
    };
    positive(eta, "eta");
    positive(gamma, "gamma");
    positive(epsilon, "epsilon");
    positive(v0, "v0");
    positive(adam_eps, "adam_eps");
    positive(aux_eta, "aux_eta");
    unit(mu, "mu");
    unit(beta1, "beta1");
    unit(beta2, "beta2");
    if (ns_iters < 0) throw ConfigError("ns_iters must be nonnegative");
}

AdaGOState AdaGOState::init(std::size_t rows, std::size_t cols, const OptimizerConfig& cfg) {
    return {Matrix(rows, cols), cfg.v0 * cfg.v0, 0};
}

MuonState MuonState::init(std::size_t rows, std::size_t cols) { return {Matrix(rows, cols), 0}; }

AdamState AdamState::init(std::size_t rows, std::size_t cols) {
    return {Matrix(rows, cols), Matrix(rows, cols), 0};
}

AdaGradNormState AdaGradNormState::init(const OptimizerConfig& cfg) { return {cfg.v0 * cfg.v0, 0}; }

Matrix momentum_update(const Matrix& momentum, const Matrix& grad, double mu) {
    linalg::require_same_shape(momentum, grad, "momentum_update");
    if (!(mu >= 0.0 && mu < 1.0)) throw InvalidInput("momentum_update: mu must lie in [0, 1)");
    Matrix out = momentum * mu;
    out.add_scaled(grad, 1.0 - mu);
    return out;
}

double grad_norm(const Matrix& grad, GradNorm norm) {
    switch (norm) {
    case GradNorm::spectral: return linalg::spectral_norm(grad);
    case GradNorm::nuclear: return linalg::nuclear_norm(grad);
    case GradNorm::frobenius: break;
    }
    return frobenius_norm(grad);
}

AdaGOStepsize adago_stepsize(double grad_norm, double v_prev_sq, const OptimizerConfig& cfg) {
    AdaGOStepsize s;
    const double clipped = std::min(grad_norm, cfg.gamma);
    s.clamped = grad_norm > cfg.gamma;
    s.v_new_sq = v_prev_sq + clipped * clipped;
    const double adaptive = cfg.eta * clipped / std::sqrt(s.v_new_sq);
    s.floored = cfg.epsilon >= adaptive;
    s.alpha = std::max(cfg.epsilon, adaptive);
    return s;
}

StepReport adago_step(Matrix& param, const Matrix& grad, AdaGOState& state, const OptimizerConfig& cfg) {
    linalg::require_same_shape(param, grad, "adago_step");
    linalg::require_finite(grad, "adago_step");
    state.momentum = momentum_update(state.momentum, grad, cfg.mu);

    const double g = grad_norm(grad, cfg.norm);
    const AdaGOStepsize s = adago_stepsize(g, state.v_sq, cfg);
    const double prev_v_sq = state.v_sq;
    state.v_sq = s.v_new_sq;
    ++state.step_count;

    StepReport r;
    r.grad_norm_f = cfg.norm == GradNorm::frobenius ? g : frobenius_norm(grad);
    r.v_after = std::sqrt(state.v_sq);
    r.accum_increment = state.v_sq - prev_v_sq;
    r.clamped = s.clamped;
    if (state.momentum.is_zero()) {
        r.stepsize = cfg.epsilon;
        r.floored = true;
        return r;
    }
    r.stepsize = s.alpha;
    r.floored = s.floored;
    const Matrix direction = linalg::orthogonalize(state.momentum, cfg.ns_iters);
    param.add_scaled(direction, -s.alpha);
    r.update_norm_f = s.alpha * frobenius_norm(direction);
    return r;
}

StepReport muon_step(Matrix& param, const Matrix& grad, MuonState& state, const OptimizerConfig& cfg) {
    linalg::require_same_shape(param, grad, "muon_step");
    linalg::require_finite(grad, "muon_step");
    state.momentum = momentum_update(state.momentum, grad, cfg.mu);
    ++state.step_count;

    StepReport r;
    r.stepsize = cfg.eta;
    r.grad_norm_f = frobenius_norm(grad);
    if (state.momentum.is_zero()) return r;
    const Matrix direction = linalg::orthogonalize(state.momentum, cfg.ns_iters);
    param.add_scaled(direction, -cfg.eta);
    r.update_norm_f = cfg.eta * frobenius_norm(direction);
    return r;
}

StepReport ogd_step(Matrix& param, const Matrix& grad, double eta, int ns_iters) {
    linalg::require_same_shape(param, grad, "ogd_step");
    StepReport r;
    r.stepsize = eta;
    r.grad_norm_f = frobenius_norm(grad);
    if (r.grad_norm_f == 0.0) return r;
    const Matrix direction = linalg::orthogonalize(grad, ns_iters);
    param.add_scaled(direction, -eta);
    r.update_norm_f = eta * frobenius_norm(direction);
    return r;
}

StepReport gd_step(Matrix& param, const Matrix& grad, double eta) {
    linalg::require_same_shape(param, grad, "gd_step");
    StepReport r;
    r.stepsize = eta;
    r.grad_norm_f = frobenius_norm(grad);
    param.add_scaled(grad, -eta);
    r.update_norm_f = eta * r.grad_norm_f;
    return r;
}

StepReport adam_step(Matrix& param, const Matrix& grad, AdamState& state, const OptimizerConfig& cfg,
                     double eta) {
    linalg::require_same_shape(param, grad, "adam_step");
    linalg::require_same_shape(state.m1, grad, "adam_step");
    ++state.step_count;
    const double t = static_cast<double>(state.step_count);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);

    StepReport r;
    r.stepsize = eta;
    r.grad_norm_f = frobenius_norm(grad);
    double upd_sq = 0.0;
    auto p = param.data();
    auto g = grad.data();
    auto m1 = state.m1.data();
    auto m2 = state.m2.data();
    for (std::size_t i = 0; i < p.size(); ++i) {
        m1[i] = cfg.beta1 * m1[i] + (1.0 - cfg.beta1) * g[i];
        m2[i] = cfg.beta2 * m2[i] + (1.0 - cfg.beta2) * g[i] * g[i];
        const double step = eta * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + cfg.adam_eps);
        p[i] -= step;
        upd_sq += step * step;
    }
    r.update_norm_f = std::sqrt(upd_sq);
    return r;
}

StepReport adagrad_norm_step(Matrix& param, const Matrix& grad, AdaGradNormState& state,
                             const OptimizerConfig& cfg) {
    linalg::require_same_shape(param, grad, "adagrad_norm_step");
    StepReport r;
    r.grad_norm_f = frobenius_norm(grad);
    r.accum_increment = r.grad_norm_f * r.grad_norm_f;
    state.v_sq += r.accum_increment;
    ++state.step_count;
    r.v_after = std::sqrt(state.v_sq);
    r.stepsize = cfg.eta / r.v_after;
    param.add_scaled(grad, -r.stepsize);
    r.update_norm_f = r.stepsize * r.grad_norm_f;
    return r;
}

} // namespace adago::optim
