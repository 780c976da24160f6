#include "adago/optim/optimizer.hpp"

#include <string>

#include "adago/errors.hpp"

namespace adago::optim {

using models::ParamKind;

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::gd, "gd"},
    {Method::ogd, "ogd"},
    {Method::adam, "adam"},
    {Method::adagrad_norm, "adagrad_norm"},
    {Method::muon, "muon"},
    {Method::adago, "adago"},
    {Method::hybrid_muon, "hybrid_muon"},
    {Method::hybrid_adago, "hybrid_adago"},
};

} // namespace

Method parse_method(std::string_view name) {
    for (auto [m, n] : kMethodNames)
        if (n == name) return m;
    throw ConfigError("unknown optimizer '" + std::string(name) + "'");
}

std::string_view to_string(Method method) {
    for (auto [m, n] : kMethodNames)
        if (m == method) return n;
    return "unknown";
}

std::string_view to_string(Rule rule) {
    switch (rule) {
    case Rule::gd: return "gd";
    case Rule::ogd: return "ogd";
    case Rule::adam: return "adam";
    case Rule::adagrad_norm: return "adagrad_norm";
    case Rule::muon: return "muon";
    case Rule::adago: return "adago";
    }
    return "unknown";
}

Optimizer::Optimizer(Method method, OptimizerConfig cfg) : method_(method), cfg_(cfg) {}

Rule Optimizer::rule_for(ParamKind kind) const {
    const bool hybrid = method_ == Method::hybrid_muon || method_ == Method::hybrid_adago;
    if (hybrid) {
        switch (kind) {
        case ParamKind::matrix: return method_ == Method::hybrid_muon ? Rule::muon : Rule::adago;
        case ParamKind::vector:
        case ParamKind::scalar: return Rule::adam;
        case ParamKind::untagged: break;
        }
        throw ConfigError("hybrid optimizer: parameter is not tagged matrix/vector/scalar");
    }
    switch (method_) {
    case Method::gd: return Rule::gd;
    case Method::ogd: return Rule::ogd;
    case Method::adam: return Rule::adam;
    case Method::adagrad_norm: return Rule::adagrad_norm;
    case Method::muon: return Rule::muon;
    default: return Rule::adago;
    }
}

void Optimizer::init_states(const models::ParamSet& params) {
    rules_.clear();
    states_.clear();
    for (const auto& p : params) {
        const Rule rule = rule_for(p.kind);
        rules_.push_back(rule);
        const auto rows = p.value.rows(), cols = p.value.cols();
        switch (rule) {
        case Rule::adago: states_.emplace_back(AdaGOState::init(rows, cols, cfg_)); break;
        case Rule::muon: states_.emplace_back(MuonState::init(rows, cols)); break;
        case Rule::adam: states_.emplace_back(AdamState::init(rows, cols)); break;
        case Rule::adagrad_norm: states_.emplace_back(AdaGradNormState::init(cfg_)); break;
        default: states_.emplace_back(std::monostate{}); break;
        }
    }
}

std::vector<ParamStepReport> Optimizer::step(models::ParamSet& params) {
    if (states_.empty()) {
        init_states(params);
    } else if (states_.size() != params.size()) {
        throw ConfigError("Optimizer: parameter set changed between steps");
    }
    std::vector<ParamStepReport> reports;
    reports.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const Matrix& grad = params[i].grad;
        Matrix& value = params.mutable_value(i);
        ParamStepReport pr{i, rules_[i], {}};
        switch (rules_[i]) {
        case Rule::gd: pr.report = gd_step(value, grad, cfg_.eta); break;
        case Rule::ogd: pr.report = ogd_step(value, grad, cfg_.eta, cfg_.ns_iters); break;
        case Rule::adam: {
            const bool aux = method_ == Method::hybrid_muon || method_ == Method::hybrid_adago;
            pr.report = adam_step(value, grad, std::get<AdamState>(states_[i]), cfg_, aux ? cfg_.aux_eta : cfg_.eta);
            break;
        }
        case Rule::adagrad_norm:
            pr.report = adagrad_norm_step(value, grad, std::get<AdaGradNormState>(states_[i]), cfg_);
            break;
        case Rule::muon: pr.report = muon_step(value, grad, std::get<MuonState>(states_[i]), cfg_); break;
        case Rule::adago: pr.report = adago_step(value, grad, std::get<AdaGOState>(states_[i]), cfg_); break;
        }
        reports.push_back(pr);
    }
    return reports;
}

} // namespace adago::optim
