#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adago/data/dataset.hpp"
#include "adago/data/sampler.hpp"
#include "adago/diagnostics/trajectory.hpp"
#include "adago/models/model.hpp"
#include "adago/optim/optimizer.hpp"

namespace adago::harness {

using linalg::Matrix;

enum class Scenario {
    linear_appendix_a,
    grf_regression,
    blob_classification,
    theorem1_sweep,
    theorem2_sweep,
    theorem3_sweep,
};

Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario scenario);

/// Loss above this, or a non-finite loss, marks a seed as diverged.
inline constexpr double kDivergenceThreshold = 1e12;

struct ExperimentConfig {
    Scenario scenario = Scenario::grf_regression;
    optim::Method optimizer = optim::Method::hybrid_adago;
    optim::OptimizerConfig optim;
    data::DatasetSpec dataset;
    std::size_t hidden = 100;       // MLP scenarios
    std::uint64_t steps = 1000;
    std::uint64_t epochs = 0;       // blob_classification: nonzero ⇒ steps = epochs·⌈n/b⌉
    std::vector<std::uint64_t> seeds{0};
    data::BatchSchedule batch = data::BatchSchedule::constant(128);
    std::uint64_t log_every = 1;
    std::string output_dir;         // empty ⇒ nothing written
    bool parallel_seeds = true;

    /// Throws ConfigError on T < 1, no seeds, log_every < 1 or bad sub-configs.
    void validate() const;
    /// Steps actually run (resolves epochs for classification).
    std::uint64_t resolved_steps() const;
    /// Compact "key=value;…" echo of the hyperparameters the method uses.
    std::string hyperparameter_string() const;
};

/// Scenario defaults: dataset shape, model, batch schedule and log cadence.
/// linear_appendix_a: m=10, d=20, J=200, full batch, W₀ = 0.
/// grf_regression: 2000 samples, d=20, hidden 100, batch 128.
/// blob_classification: 2000 samples, d=20, 10 classes, batch 128.
ExperimentConfig scenario_defaults(Scenario scenario);

models::ModelSpec model_for(const ExperimentConfig& cfg);

/// Per-step invariants re-checked after a run, over every parameter that used
/// the AdaGO rule: ε ≤ α_t, v_t nondecreasing, v_t² − v_{t−1}² ≤ γ², and the
/// log-sum bound Σ a_t/v_t² ≤ ln(γ²T/v₀²) + 1 with a_t = min(‖G_t‖², γ²).
struct InvariantReport {
    bool checked = false; // false when no parameter used the AdaGO rule
    bool stepsize_floor = true;
    bool v_monotone = true;
    bool increment_bounded = true;
    bool log_sum_bound = true;
    double log_sum_lhs = 0.0; // worst parameter
    double log_sum_rhs = 0.0;
    std::string detail;

    bool ok() const noexcept { return stepsize_floor && v_monotone && increment_bounded && log_sum_bound; }
};

struct SeedRun {
    std::uint64_t seed = 0;
    diagnostics::Trajectory trajectory;
    bool diverged = false;
    std::string divergence_reason;
    double final_train_loss = 0.0;
    double final_test_loss = 0.0;
    std::uint64_t steps_completed = 0;
    InvariantReport invariants;
    /// a_t = accumulator increments of the lead matrix parameter, one per step
    /// (empty unless the lead parameter used the AdaGO rule).
    std::vector<double> lead_increments;
    models::ParamSet final_params;
};

struct SummaryRow {
    std::string optimizer;
    std::string scenario;
    std::string hyperparameters;
    std::string batch;
    std::uint64_t steps = 0;
    std::size_t n_seeds = 0;
    std::size_t n_diverged = 0;
    double final_train_mean = 0.0;
    double final_train_std = 0.0;
    double final_test_mean = 0.0;
    double final_test_std = 0.0;
    bool best_grid_cell = false;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<SeedRun> runs;
    SummaryRow summary;
};

/// Everything a per-step observer may look at. `before` holds Θ_{t−1} with the
/// gradient G_t the optimizer consumed; `after` holds Θ_t.
struct StepContext {
    std::uint64_t seed;
    std::uint64_t t;
    const models::ParamSet& before;
    const models::ParamSet& after;
    const std::vector<optim::ParamStepReport>& reports;
    const models::Batch& batch;
};
using StepObserver = std::function<void(const StepContext&)>;

/// Problem instance for one seed (data, model, initial parameters).
struct Problem {
    models::ModelSpec model;
    data::SplitDataset data;
    Matrix w_star; // linear scenarios only
    Matrix design; // linear scenarios only, d × J
    models::ParamSet init;
};

Problem build_problem(const ExperimentConfig& cfg, std::uint64_t seed);

/// One seed. Non-finite or exploding loss ends the run early with
/// `diverged` set; it never throws for numerical blow-up.
SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const StepObserver& observer = {});

/// All seeds (optionally in parallel, results in seed order), summary
/// aggregated over non-diverged seeds, files written when output_dir is set.
/// Throws ContractViolation if a post-run invariant fails.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

SummaryRow summarize(const ExperimentConfig& cfg, const std::vector<SeedRun>& runs);

} // namespace adago::harness
