#include "adago/harness/grid.hpp"

#include <cmath>
#include <fstream>

#include "adago/errors.hpp"
#include "adago/harness/io.hpp"

namespace adago::harness {

void apply_hyperparameter(ExperimentConfig& cfg, const std::string& name, double value) {
    auto& o = cfg.optim;
    if (name == "eta") o.eta = value;
    else if (name == "mu") o.mu = value;
    else if (name == "gamma") o.gamma = value;
    else if (name == "eps" || name == "epsilon") o.epsilon = value;
    else if (name == "v0") o.v0 = value;
    else if (name == "aux_eta") o.aux_eta = value;
    else if (name == "ns_iters") o.ns_iters = static_cast<int>(std::lround(value));
    else throw ConfigError("unknown grid hyperparameter '" + name + "'");
}

std::vector<SummaryRow> GridResult::rows() const {
    std::vector<SummaryRow> out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out.push_back(cells[i].result.summary);
        out.back().best_grid_cell = best && *best == i;
    }
    return out;
}

GridResult grid_search(const ExperimentConfig& base, const Grid& grid, const GridOptions& options) {
    if (grid.empty()) throw ConfigError("grid_search: empty grid");
    for (const auto& [name, values] : grid) {
        if (values.empty()) throw ConfigError("grid_search: no values for '" + name + "'");
        ExperimentConfig probe = base;
        apply_hyperparameter(probe, name, values.front());
    }
    const bool adago = base.optimizer == optim::Method::adago || base.optimizer == optim::Method::hybrid_adago;

    GridResult result;
    std::vector<std::size_t> odometer(grid.size(), 0);
    for (bool done = false; !done;) {
        ExperimentConfig cfg = base;
        std::map<std::string, double> values;
        std::size_t k = 0;
        for (const auto& [name, list] : grid) {
            values[name] = list[odometer[k]];
            apply_hyperparameter(cfg, name, list[odometer[k]]);
            ++k;
        }
        // Advance the odometer, last key fastest.
        done = true;
        for (std::size_t pos = grid.size(); pos-- > 0;) {
            const auto& list = std::next(grid.begin(), static_cast<std::ptrdiff_t>(pos))->second;
            if (++odometer[pos] < list.size()) {
                done = false;
                break;
            }
            odometer[pos] = 0;
        }

        if (options.require_eps_below_eta_sq && adago && !(cfg.optim.epsilon < cfg.optim.eta * cfg.optim.eta)) {
            ++result.skipped;
            continue;
        }
        if (!base.output_dir.empty())
            cfg.output_dir = (std::filesystem::path(base.output_dir) / ("cell_" + std::to_string(result.cells.size()))).string();
        result.cells.push_back({values, run_experiment(cfg)});
    }

    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const auto& s = result.cells[i].result.summary;
        if (s.n_diverged == s.n_seeds || !std::isfinite(s.final_train_mean)) continue;
        if (!result.best) {
            result.best = i;
            continue;
        }
        const auto& b = result.cells[*result.best].result;
        const double best_loss = b.summary.final_train_mean;
        const double tol = 1e-12 * std::max(std::abs(best_loss), std::abs(s.final_train_mean));
        if (s.final_train_mean < best_loss - tol) {
            result.best = i;
        } else if (std::abs(s.final_train_mean - best_loss) <= tol &&
                   result.cells[i].result.config.optim.eta < b.config.optim.eta) {
            result.best = i;
        }
    }

    if (!base.output_dir.empty()) {
        std::filesystem::create_directories(base.output_dir);
        std::ofstream f(std::filesystem::path(base.output_dir) / "summary.csv", std::ios::binary);
        write_summary_csv(f, result.rows());
    }
    return result;
}

} // namespace adago::harness
