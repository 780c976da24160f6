#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include "adago/models/param_set.hpp"
#include "adago/optim/config.hpp"
#include "adago/optim/steps.hpp"

namespace adago::optim {

enum class Method { gd, ogd, adam, adagrad_norm, muon, adago, hybrid_muon, hybrid_adago };

/// The per-parameter update actually applied.
enum class Rule { gd, ogd, adam, adagrad_norm, muon, adago };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);
std::string_view to_string(Rule rule);

/// True for rules with an AdaGO-style clamped accumulator.
constexpr bool is_adaptive(Rule rule) { return rule == Rule::adago; }

struct ParamStepReport {
    std::size_t index = 0;
    Rule rule = Rule::gd;
    StepReport report;
};

/// Applies one optimizer method to every entry of a ParamSet, keeping
/// per-parameter state. Pure methods use their rule on every parameter;
/// hybrid_muon / hybrid_adago route matrix parameters to Muon / AdaGO and
/// vector or scalar parameters to Adam with `aux_eta`.
class Optimizer {
public:
    Optimizer(Method method, OptimizerConfig cfg);

    /// Consumes the gradients stored in `params`. Throws ConfigError if a
    /// hybrid method meets an untagged parameter or the set changes shape
    /// between steps.
    std::vector<ParamStepReport> step(models::ParamSet& params);

    Rule rule_for(models::ParamKind kind) const;
    Method method() const noexcept { return method_; }
    const OptimizerConfig& config() const noexcept { return cfg_; }

private:
    using State = std::variant<std::monostate, AdaGOState, MuonState, AdamState, AdaGradNormState>;

    void init_states(const models::ParamSet& params);

    Method method_;
    OptimizerConfig cfg_;
    std::vector<Rule> rules_;
    std::vector<State> states_;
};

} // namespace adago::optim
