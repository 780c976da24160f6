#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "adago/diagnostics/rate.hpp"
#include "adago/harness/experiment.hpp"

namespace adago::harness {

enum class TheoremPreset { stochastic_momentum, deterministic, growing_sqrt, growing_linear };

/// Accepts "1", "2", "3-sqrt", "3-linear".
TheoremPreset parse_theorem_preset(std::string_view name);
std::string_view to_string(TheoremPreset which);

/// AdaGO on the linear scenario with the schedule the theorem prescribes for
/// horizon T:
///   1: b_t = 1, ε = T^{−3/4}, μ = 1 − T^{−1/2}, η = T^{−(3/8+q)}
///   2: full batch, μ = 0, ε = T^{−1/2}, η = T^{−q}
///   3-sqrt / 3-linear: b_t = √t or t, μ = 0, ε = T^{−1/2}, η = T^{−q}
/// Requires T ≥ 10 and q > 0. Logs every step.
ExperimentConfig theorem_preset(TheoremPreset which, std::uint64_t horizon, double q);

struct SweepPoint {
    std::uint64_t horizon = 0;
    double metric_mean = 0.0; // seed mean of (1/T)Σ‖∇L(Θ_{t−1})‖_*
    std::vector<double> metric_per_seed;
    std::size_t diverged = 0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    diagnostics::RateFit fit;
};

/// Geometric horizons from t_min to t_max inclusive.
std::vector<std::uint64_t> geometric_horizons(std::uint64_t t_min, std::uint64_t t_max, std::size_t count);

/// One preset run per horizon (the schedule depends on T), metric averaged
/// over seeds, then the log-log slope across horizons.
SweepResult theorem_sweep(TheoremPreset which, const std::vector<std::uint64_t>& horizons, double q,
                          const std::vector<std::uint64_t>& seeds);

} // namespace adago::harness
