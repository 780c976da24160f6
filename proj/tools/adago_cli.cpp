#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adago/diagnostics/lemmas.hpp"
#include "adago/diagnostics/rate.hpp"
#include "adago/errors.hpp"
#include "adago/harness/experiment.hpp"
#include "adago/harness/grid.hpp"
#include "adago/harness/io.hpp"
#include "adago/harness/plots.hpp"
#include "adago/harness/presets.hpp"

namespace fs = std::filesystem;
using namespace adago;

namespace {

// Flags shared by `run` and `grid`; unset flags keep the scenario defaults.
struct RunFlags {
    std::string scenario = "grf_regression";
    std::optional<std::string> config_file;
    std::optional<std::string> optimizer;
    std::optional<double> eta, mu, gamma, eps, v0, aux_eta, beta1, beta2;
    std::optional<int> ns_iters;
    std::optional<std::string> norm;
    std::optional<std::uint64_t> steps, epochs, log_every;
    std::vector<std::uint64_t> seeds;
    std::optional<std::string> batch;
    std::optional<std::size_t> samples, d_in, d_out, hidden, features;
    std::optional<std::uint64_t> data_seed;
    bool full_size = false;
    bool serial_seeds = false;
    std::optional<std::string> out;

    void attach(CLI::App& app) {
        app.add_option("--scenario", scenario, "linear_appendix_a | grf_regression | blob_classification | theorem{1,2,3}_sweep")
            ->capture_default_str();
        app.add_option("--config", config_file, "JSON config (as written to config.json); flags override it");
        app.add_option("--optimizer", optimizer, "gd | ogd | adam | adagrad_norm | muon | adago | hybrid_muon | hybrid_adago");
        app.add_option("--eta", eta, "learning rate");
        app.add_option("--mu", mu, "momentum");
        app.add_option("--gamma", gamma, "AdaGO clamp on the gradient norm");
        app.add_option("--eps", eps, "AdaGO stepsize floor");
        app.add_option("--v0", v0, "initial accumulator");
        app.add_option("--aux-eta", aux_eta, "Adam learning rate for vector parameters under hybrid methods");
        app.add_option("--beta1", beta1);
        app.add_option("--beta2", beta2);
        app.add_option("--ns-iters", ns_iters, "Newton-Schulz iterations (0 = exact SVD)");
        app.add_option("--norm", norm, "gradient norm for AdaGO: frobenius | spectral | nuclear");
        app.add_option("--steps", steps, "iterations T");
        app.add_option("--epochs", epochs, "classification only: steps = epochs * ceil(n/b)");
        app.add_option("--seeds", seeds, "seed list, e.g. --seeds 0 1 2")->delimiter(',');
        app.add_option("--batch", batch, "full | sqrt | linear | <size>");
        app.add_option("--log-every", log_every, "trajectory cadence");
        app.add_option("--samples", samples, "dataset size");
        app.add_option("--d-in", d_in);
        app.add_option("--d-out", d_out, "output dimension or class count");
        app.add_option("--hidden", hidden, "MLP hidden width");
        app.add_option("--features", features, "random Fourier features for the GRF");
        app.add_option("--data-seed", data_seed, "base dataset seed (experiment seed is added)");
        app.add_flag("--full-size", full_size, "GRF with 10000 samples and 50-dimensional input and output");
        app.add_flag("--serial-seeds", serial_seeds, "run seeds one after another");
        app.add_option("--out", out, "output directory (default: $ADAGO_OUTPUT_DIR or ./adago_runs)");
    }

    harness::ExperimentConfig build() const {
        harness::ExperimentConfig cfg;
        if (config_file) {
            std::ifstream f(*config_file);
            if (!f) throw ConfigError("cannot read " + *config_file);
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = harness::config_from_json(ss.str());
        } else {
            cfg = harness::scenario_defaults(harness::parse_scenario(scenario));
        }
        auto& o = cfg.optim;
        if (optimizer) cfg.optimizer = optim::parse_method(*optimizer);
        if (eta) o.eta = *eta;
        if (mu) o.mu = *mu;
        if (gamma) o.gamma = *gamma;
        if (eps) o.epsilon = *eps;
        if (v0) o.v0 = *v0;
        if (aux_eta) o.aux_eta = *aux_eta;
        if (beta1) o.beta1 = *beta1;
        if (beta2) o.beta2 = *beta2;
        if (ns_iters) o.ns_iters = *ns_iters;
        if (norm) o.norm = optim::parse_grad_norm(*norm);
        if (steps) cfg.steps = *steps;
        if (epochs) cfg.epochs = *epochs;
        if (!seeds.empty()) cfg.seeds = seeds;
        if (batch) cfg.batch = data::BatchSchedule::parse(*batch);
        if (log_every) cfg.log_every = *log_every;
        if (full_size) {
            cfg.dataset.n_samples = 10000;
            cfg.dataset.d_in = 50;
            cfg.dataset.d_out = 50;
        }
        if (samples) cfg.dataset.n_samples = *samples;
        if (d_in) cfg.dataset.d_in = *d_in;
        if (d_out) cfg.dataset.d_out = *d_out;
        if (hidden) cfg.hidden = *hidden;
        if (features) cfg.dataset.n_features = *features;
        if (data_seed) cfg.dataset.seed = *data_seed;
        if (serial_seeds) cfg.parallel_seeds = false;
        cfg.output_dir = out ? *out
                             : (harness::default_output_dir() /
                                (std::string(harness::to_string(cfg.scenario)) + "_" +
                                 std::string(optim::to_string(cfg.optimizer))))
                                   .string();
        cfg.validate();
        return cfg;
    }
};

// "eta=0.1,0.3;eps=1e-3" → grid.
harness::Grid parse_grid(const std::vector<std::string>& specs) {
    harness::Grid grid;
    for (const auto& spec : specs) {
        std::stringstream parts(spec);
        std::string part;
        while (std::getline(parts, part, ';')) {
            if (part.empty()) continue;
            const auto eq = part.find('=');
            if (eq == std::string::npos) throw ConfigError("grid entry '" + part + "' needs name=v1,v2,...");
            auto& values = grid[part.substr(0, eq)];
            std::stringstream vs(part.substr(eq + 1));
            std::string v;
            while (std::getline(vs, v, ',')) {
                try {
                    values.push_back(std::stod(v));
                } catch (const std::exception&) {
                    throw ConfigError("grid value '" + v + "' is not a number");
                }
            }
        }
    }
    return grid;
}

void print_rows(const std::vector<harness::SummaryRow>& rows) { harness::write_summary_csv(std::cout, rows); }

int cmd_run(const RunFlags& flags) {
    const auto cfg = flags.build();
    const auto result = harness::run_experiment(cfg);
    print_rows({result.summary});
    for (const auto& r : result.runs)
        if (r.diverged) std::cerr << "seed " << r.seed << " diverged: " << r.divergence_reason << '\n';
    std::cerr << "wrote " << cfg.output_dir << '\n';
    return 0;
}

int cmd_grid(const RunFlags& flags, const std::vector<std::string>& grid_specs, bool eps_filter) {
    const auto cfg = flags.build();
    const auto result = harness::grid_search(cfg, parse_grid(grid_specs), {eps_filter});
    print_rows(result.rows());
    if (result.skipped) std::cerr << result.skipped << " cells skipped by the eps < eta^2 filter\n";
    if (!result.best) std::cerr << "every cell diverged; no best cell\n";
    std::cerr << "wrote " << cfg.output_dir << '\n';
    return 0;
}

struct PresetFlags {
    std::string which = "2";
    std::uint64_t horizon = 1000;
    double q = 0.05;
    std::vector<std::uint64_t> seeds{0};
    std::vector<std::uint64_t> sweep; // t_min t_max count
    std::optional<std::string> out;
};

int cmd_preset(const PresetFlags& f) {
    const auto which = harness::parse_theorem_preset(f.which);
    if (!f.sweep.empty()) {
        if (f.sweep.size() != 3) throw ConfigError("--sweep takes t_min t_max count");
        const auto horizons = harness::geometric_horizons(f.sweep[0], f.sweep[1], f.sweep[2]);
        const auto res = harness::theorem_sweep(which, horizons, f.q, f.seeds);
        std::cout << "T,avg_nuclear_grad_mean,n_seeds,n_diverged\n";
        for (const auto& p : res.points)
            std::cout << p.horizon << ',' << p.metric_mean << ',' << p.metric_per_seed.size() << ',' << p.diverged << '\n';
        std::cout << "# slope " << res.fit.slope << " intercept " << res.fit.intercept << " r_squared "
                  << res.fit.r_squared << '\n';
        return 0;
    }
    auto cfg = harness::theorem_preset(which, f.horizon, f.q);
    cfg.seeds = f.seeds;
    cfg.output_dir = f.out ? *f.out
                           : (harness::default_output_dir() / ("theorem" + std::string(harness::to_string(which)) +
                                                               "_T" + std::to_string(f.horizon)))
                                 .string();
    std::cerr << harness::config_to_json(cfg) << '\n';
    const auto result = harness::run_experiment(cfg);
    print_rows({result.summary});
    std::cerr << "wrote " << cfg.output_dir << '\n';
    return 0;
}

std::vector<fs::path> trajectory_files(const fs::path& p) {
    std::vector<fs::path> out;
    if (fs::is_directory(p)) {
        for (const auto& e : fs::directory_iterator(p))
            if (e.path().extension() == ".csv" && e.path().stem().string().rfind("trajectory", 0) == 0)
                out.push_back(e.path());
        std::sort(out.begin(), out.end());
    } else {
        out.push_back(p);
    }
    if (out.empty()) throw InvalidInput("no trajectory CSV found under " + p.string());
    return out;
}

diagnostics::Trajectory load_trajectory(const fs::path& p) {
    std::ifstream f(p);
    if (!f) throw InvalidInput("cannot read " + p.string());
    return diagnostics::read_trajectory_csv(f);
}

int cmd_diagnose(const std::string& run_dir, const std::string& metric_name, std::size_t points) {
    const fs::path dir(run_dir);
    std::optional<harness::ExperimentConfig> cfg;
    if (fs::exists(dir / "config.json")) {
        std::ifstream f(dir / "config.json");
        std::stringstream ss;
        ss << f.rdbuf();
        cfg = harness::config_from_json(ss.str());
    }
    const auto metric = diagnostics::parse_rate_metric(metric_name);
    bool all_ok = true;
    std::cout << "file,records,t_increasing_v_monotone,stepsize_floor,log_sum_lhs,log_sum_rhs,log_sum_holds,slope,r_squared\n";
    for (const auto& path : trajectory_files(dir)) {
        const auto traj = load_trajectory(path);
        std::string monotone = "yes";
        try {
            traj.validate();
        } catch (const ContractViolation&) {
            monotone = "no";
            all_ok = false;
        }
        std::string floor = "n/a", lhs = "", rhs = "", holds = "n/a";
        const bool adaptive = cfg && (cfg->optimizer == optim::Method::adago || cfg->optimizer == optim::Method::hybrid_adago);
        if (adaptive) {
            bool ok = true;
            for (const auto& r : traj.records()) ok = ok && r.stepsize >= cfg->optim.epsilon;
            floor = ok ? "yes" : "no";
            all_ok = all_ok && ok;
            // The bound needs every increment, so only complete trajectories qualify.
            if (cfg->log_every == 1 && !traj.empty() && traj.back().t == traj.size()) {
                const double g2 = cfg->optim.gamma * cfg->optim.gamma, v02 = cfg->optim.v0 * cfg->optim.v0;
                double sum = 0.0;
                for (const auto& r : traj.records()) sum += r.accum_increment / (r.v * r.v);
                const double bound = std::log(g2 * static_cast<double>(traj.size()) / v02) + 1.0;
                lhs = std::to_string(sum);
                rhs = std::to_string(bound);
                holds = sum <= bound + 1e-12 ? "yes" : "no";
                all_ok = all_ok && sum <= bound + 1e-12;
            }
        }
        std::string slope, r2;
        try {
            const auto fit = diagnostics::rate_slope_fit(traj, metric, {1, 0, points});
            slope = std::to_string(fit.slope);
            r2 = std::to_string(fit.r_squared);
        } catch (const InvalidInput&) {
            slope = "n/a";
        }
        std::cout << path.filename().string() << ',' << traj.size() << ',' << monotone << ',' << floor << ',' << lhs << ','
                  << rhs << ',' << holds << ',' << slope << ',' << r2 << '\n';
    }
    return all_ok ? 0 : 2;
}

int cmd_plot(const std::vector<std::string>& inputs, const std::vector<std::string>& labels, const std::string& out,
             bool with_fit) {
    std::vector<harness::LabeledTrajectory> series;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        for (const auto& path : trajectory_files(inputs[i])) {
            std::string label = i < labels.size() ? labels[i] : fs::path(inputs[i]).filename().string();
            if (fs::is_directory(inputs[i])) label += "/" + path.stem().string();
            series.push_back({label, load_trajectory(path)});
        }
    }
    std::optional<diagnostics::RateFit> fit;
    if (with_fit && !series.empty()) {
        try {
            fit = diagnostics::rate_slope_fit(series.front().trajectory, diagnostics::RateMetric::avg_nuclear_grad);
        } catch (const InvalidInput& e) {
            std::cerr << "no slope overlay: " << e.what() << '\n';
        }
    }
    const auto files = harness::emit_plots(series, out, fit);
    std::cout << files.loss_svg.string() << '\n' << files.grad_svg.string() << '\n' << files.data_csv.string() << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"AdaGO optimizer experiments: runs, grid searches, theorem presets, diagnostics and plots"};
    app.require_subcommand(1);

    RunFlags run_flags;
    auto* run = app.add_subcommand("run", "run one configuration over its seeds");
    run_flags.attach(*run);

    RunFlags grid_flags;
    std::vector<std::string> grid_specs;
    bool eps_filter = false;
    auto* grid = app.add_subcommand("grid", "grid search; best cell has the lowest mean final training loss");
    grid_flags.attach(*grid);
    grid->add_option("--grid", grid_specs, "name=v1,v2[;name=...], repeatable")->required();
    grid->add_flag("--eps-below-eta-sq", eps_filter, "skip AdaGO cells with eps >= eta^2");

    PresetFlags preset_flags;
    auto* preset = app.add_subcommand("preset", "theorem schedule on the linear scenario");
    preset->add_option("--theorem", preset_flags.which, "1 | 2 | 3-sqrt | 3-linear")->capture_default_str();
    preset->add_option("--T", preset_flags.horizon, "horizon")->capture_default_str();
    preset->add_option("--q", preset_flags.q, "exponent slack q > 0")->capture_default_str();
    preset->add_option("--seeds", preset_flags.seeds)->delimiter(',');
    preset->add_option("--sweep", preset_flags.sweep, "t_min t_max count: fit the rate across horizons")->expected(3);
    preset->add_option("--out", preset_flags.out);

    std::string diag_dir, diag_metric = "avg_nuclear_grad";
    std::size_t diag_points = 20;
    auto* diagnose = app.add_subcommand("diagnose", "re-check invariants and fit rates on a run directory");
    diagnose->add_option("run_dir", diag_dir)->required();
    diagnose->add_option("--metric", diag_metric, "avg_nuclear_grad | min_nuclear_grad")->capture_default_str();
    diagnose->add_option("--points", diag_points, "geometric horizons in the slope fit")->capture_default_str();

    std::vector<std::string> plot_inputs, plot_labels;
    std::string plot_out = "plots";
    bool plot_fit = false;
    auto* plot = app.add_subcommand("plot", "SVG loss and gradient-norm charts from trajectory CSVs");
    plot->add_option("inputs", plot_inputs, "trajectory CSVs or run directories")->required();
    plot->add_option("--labels", plot_labels)->delimiter(',');
    plot->add_option("--out", plot_out)->capture_default_str();
    plot->add_flag("--fit", plot_fit, "overlay the fitted slope of the first series");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(run_flags);
        if (*grid) return cmd_grid(grid_flags, grid_specs, eps_filter);
        if (*preset) return cmd_preset(preset_flags);
        if (*diagnose) return cmd_diagnose(diag_dir, diag_metric, diag_points);
        if (*plot) return cmd_plot(plot_inputs, plot_labels, plot_out, plot_fit);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
