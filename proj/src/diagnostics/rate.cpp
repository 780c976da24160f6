#include "adago/diagnostics/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "adago/errors.hpp"

namespace adago::diagnostics {

RateFit fit_power_law(std::span<const double> horizons, std::span<const double> metric) {
    if (horizons.size() != metric.size()) throw InvalidInput("fit_power_law: length mismatch");
    RateFit fit;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < metric.size(); ++i) {
        if (!(metric[i] > 0.0) || !(horizons[i] > 0.0) || !std::isfinite(metric[i])) {
            ++fit.excluded;
            continue;
        }
        lx.push_back(std::log(horizons[i]));
        ly.push_back(std::log(metric[i]));
    }
    const std::size_t n = lx.size();
    if (n < 2) throw InvalidInput("fit_power_law: fewer than two positive points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InvalidInput("fit_power_law: horizons must not all coincide");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    const double ss_res = std::max(0.0, syy - fit.slope * sxy);
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    fit.t_min = std::exp(*std::min_element(lx.begin(), lx.end()));
    fit.t_max = std::exp(*std::max_element(lx.begin(), lx.end()));
    fit.points = n;
    return fit;
}

RateMetric parse_rate_metric(std::string_view name) {
    if (name == "avg_nuclear_grad" || name == "avg") return RateMetric::avg_nuclear_grad;
    if (name == "min_nuclear_grad" || name == "min") return RateMetric::min_nuclear_grad;
    throw ConfigError("unknown rate metric '" + std::string(name) + "'");
}

double stationarity_metric(const Trajectory& traj, RateMetric metric, std::uint64_t horizon) {
    double sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (const auto& r : traj.records()) {
        if (r.t > horizon) break;
        sum += r.grad_norm_nuclear;
        best = std::min(best, r.grad_norm_nuclear);
        ++count;
    }
    if (count == 0) throw InvalidInput("stationarity_metric: no records up to the horizon");
    return metric == RateMetric::avg_nuclear_grad ? sum / static_cast<double>(count) : best;
}

RateFit rate_slope_fit(const Trajectory& traj, RateMetric metric, const RateWindow& window) {
    if (traj.empty()) throw InvalidInput("rate_slope_fit: empty trajectory");
    if (window.points < 10) throw InvalidInput("rate_slope_fit: the window needs at least 10 points");
    const std::uint64_t last = traj.back().t;
    const std::uint64_t hi = window.t_max == 0 ? last : std::min(window.t_max, last);
    const std::uint64_t lo = std::max<std::uint64_t>(window.t_min, traj.records().front().t);
    if (lo >= hi) throw InvalidInput("rate_slope_fit: window outside the trajectory");

    // Snap each geometric horizon down to the last logged t at or below it.
    std::vector<double> horizons, values;
    const double ratio = std::log(static_cast<double>(hi) / static_cast<double>(lo));
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < window.points; ++i) {
        const double target = static_cast<double>(lo) * std::exp(ratio * static_cast<double>(i) /
                                                                 static_cast<double>(window.points - 1));
        const auto h = static_cast<std::uint64_t>(std::llround(target));
        std::uint64_t snapped = 0;
        for (const auto& r : traj.records()) {
            if (r.t > h) break;
            snapped = r.t;
        }
        if (snapped == 0 || snapped == prev) continue;
        prev = snapped;
        horizons.push_back(static_cast<double>(snapped));
        values.push_back(stationarity_metric(traj, metric, snapped));
    }
    if (horizons.size() < 10)
        throw InvalidInput("rate_slope_fit: fewer than 10 distinct logged horizons in the window");
    return fit_power_law(horizons, values);
}

} // namespace adago::diagnostics
