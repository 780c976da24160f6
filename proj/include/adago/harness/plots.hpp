#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adago/diagnostics/rate.hpp"
#include "adago/diagnostics/trajectory.hpp"

namespace adago::harness {

struct LabeledTrajectory {
    std::string label;
    diagnostics::Trajectory trajectory;
};

struct PlotFiles {
    std::filesystem::path loss_svg;
    std::filesystem::path grad_svg;
    std::filesystem::path data_csv;
};

/// Writes loss.svg (train, and test when present, vs step), grad_norm.svg
/// (log-log nuclear gradient norm vs step, with the fitted slope overlaid when
/// `fit` is given) and plot_data.csv with the plotted series.
/// Throws InvalidInput when `series` is empty.
PlotFiles emit_plots(const std::vector<LabeledTrajectory>& series, const std::filesystem::path& out_dir,
                     const std::optional<diagnostics::RateFit>& fit = std::nullopt);

} // namespace adago::harness
