#include "adago/harness/presets.hpp"

#include <cmath>

#include "adago/errors.hpp"

namespace adago::harness {

TheoremPreset parse_theorem_preset(std::string_view name) {
    if (name == "1") return TheoremPreset::stochastic_momentum;
    if (name == "2") return TheoremPreset::deterministic;
    if (name == "3-sqrt") return TheoremPreset::growing_sqrt;
    if (name == "3-linear") return TheoremPreset::growing_linear;
    throw ConfigError("unknown theorem preset '" + std::string(name) + "' (expected 1, 2, 3-sqrt or 3-linear)");
}

std::string_view to_string(TheoremPreset which) {
    switch (which) {
    case TheoremPreset::deterministic: return "2";
    case TheoremPreset::growing_sqrt: return "3-sqrt";
    case TheoremPreset::growing_linear: return "3-linear";
    case TheoremPreset::stochastic_momentum: break;
    }
    return "1";
}

ExperimentConfig theorem_preset(TheoremPreset which, std::uint64_t horizon, double q) {
    if (horizon < 10) throw ConfigError("theorem_preset: T must be at least 10");
    if (!(q > 0.0)) throw ConfigError("theorem_preset: q must be positive");
    const double t = static_cast<double>(horizon);
    Scenario scenario = Scenario::theorem3_sweep;
    if (which == TheoremPreset::stochastic_momentum) scenario = Scenario::theorem1_sweep;
    if (which == TheoremPreset::deterministic) scenario = Scenario::theorem2_sweep;

    ExperimentConfig cfg = scenario_defaults(scenario);
    cfg.optimizer = optim::Method::adago;
    cfg.steps = horizon;
    cfg.log_every = 1;
    switch (which) {
    case TheoremPreset::stochastic_momentum:
        cfg.batch = data::BatchSchedule::constant(1);
        cfg.optim.epsilon = std::pow(t, -0.75);
        cfg.optim.mu = 1.0 - std::pow(t, -0.5);
        cfg.optim.eta = std::pow(t, -(0.375 + q));
        break;
    case TheoremPreset::deterministic:
    case TheoremPreset::growing_sqrt:
    case TheoremPreset::growing_linear:
        cfg.batch = which == TheoremPreset::deterministic ? data::BatchSchedule::full()
                    : which == TheoremPreset::growing_sqrt ? data::BatchSchedule::sqrt_t()
                                                           : data::BatchSchedule::linear_t();
        cfg.optim.epsilon = std::pow(t, -0.5);
        cfg.optim.mu = 0.0;
        cfg.optim.eta = std::pow(t, -q);
        break;
    }
    return cfg;
}

std::vector<std::uint64_t> geometric_horizons(std::uint64_t t_min, std::uint64_t t_max, std::size_t count) {
    if (t_min < 1 || t_max <= t_min || count < 2) throw ConfigError("geometric_horizons: need 1 ≤ t_min < t_max and count ≥ 2");
    std::vector<std::uint64_t> out;
    const double ratio = std::log(static_cast<double>(t_max) / static_cast<double>(t_min));
    for (std::size_t i = 0; i < count; ++i) {
        const auto h = static_cast<std::uint64_t>(std::llround(
            static_cast<double>(t_min) * std::exp(ratio * static_cast<double>(i) / static_cast<double>(count - 1))));
        if (out.empty() || h > out.back()) out.push_back(h);
    }
    return out;
}

SweepResult theorem_sweep(TheoremPreset which, const std::vector<std::uint64_t>& horizons, double q,
                          const std::vector<std::uint64_t>& seeds) {
    if (horizons.size() < 2) throw ConfigError("theorem_sweep: need at least two horizons");
    SweepResult out;
    std::vector<double> ts, ms;
    for (const auto horizon : horizons) {
        ExperimentConfig cfg = theorem_preset(which, horizon, q);
        cfg.seeds = seeds;
        const auto result = run_experiment(cfg);
        SweepPoint p;
        p.horizon = horizon;
        for (const auto& run : result.runs) {
            if (run.diverged) {
                ++p.diverged;
                continue;
            }
            p.metric_per_seed.push_back(
                diagnostics::stationarity_metric(run.trajectory, diagnostics::RateMetric::avg_nuclear_grad, horizon));
        }
        double sum = 0.0;
        for (double m : p.metric_per_seed) sum += m;
        p.metric_mean = p.metric_per_seed.empty() ? std::nan("") : sum / static_cast<double>(p.metric_per_seed.size());
        ts.push_back(static_cast<double>(horizon));
        ms.push_back(p.metric_mean);
        out.points.push_back(std::move(p));
    }
    out.fit = diagnostics::fit_power_law(ts, ms);
    return out;
}

} // namespace adago::harness
