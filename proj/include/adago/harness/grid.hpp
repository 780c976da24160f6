#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adago/harness/experiment.hpp"

namespace adago::harness {

/// Hyperparameter name → values. Recognized names: eta, mu, gamma, eps, v0,
/// aux_eta, ns_iters.
using Grid = std::map<std::string, std::vector<double>>;

struct GridOptions {
    /// Skip AdaGO cells with ε ≥ η² (the empirical rule of thumb for ε).
    bool require_eps_below_eta_sq = false;
};

struct GridCell {
    std::map<std::string, double> values;
    ExperimentResult result;
};

struct GridResult {
    std::vector<GridCell> cells;
    std::optional<std::size_t> best; // unset when every cell diverged
    std::size_t skipped = 0;         // filtered by GridOptions
    std::vector<SummaryRow> rows() const;
};

/// Throws ConfigError on an empty grid or unknown name.
void apply_hyperparameter(ExperimentConfig& cfg, const std::string& name, double value);

/// Cartesian product in key order. Best cell = lowest mean final training loss
/// over non-diverged seeds, ties (relative 1e-12) go to the smaller η. Cells
/// write into <output_dir>/cell_<i> and the combined summary into
/// <output_dir>/summary.csv when output_dir is set.
GridResult grid_search(const ExperimentConfig& base, const Grid& grid, const GridOptions& options = {});

} // namespace adago::harness
