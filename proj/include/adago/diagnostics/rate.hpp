#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "adago/diagnostics/trajectory.hpp"

namespace adago::diagnostics {

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t points = 0;
    std::size_t excluded = 0; // nonpositive metric values skipped
};

/// Least squares of ln(metric) on ln(T). Nonpositive metric values are dropped
/// and counted in `excluded`; fewer than two usable points throws InvalidInput.
RateFit fit_power_law(std::span<const double> horizons, std::span<const double> metric);

enum class RateMetric { avg_nuclear_grad, min_nuclear_grad };

RateMetric parse_rate_metric(std::string_view name);

struct RateWindow {
    std::uint64_t t_min = 1;
    std::uint64_t t_max = 0; // 0 ⇒ last logged step
    std::size_t points = 20; // geometric grid size, at least 10
};

/// Stationarity metric up to T: running average or running minimum of
/// grad_norm_nuclear over records with t ≤ T.
double stationarity_metric(const Trajectory& traj, RateMetric metric, std::uint64_t horizon);

/// Evaluates the metric on a geometric grid of horizons in the window and fits
/// the slope. Horizons without a logged record are snapped to the nearest one.
RateFit rate_slope_fit(const Trajectory& traj, RateMetric metric, const RateWindow& window = {});

} // namespace adago::diagnostics
