#include "adago/harness/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>

#include "adago/data/generators.hpp"
#include "adago/diagnostics/lemmas.hpp"
#include "adago/errors.hpp"
#include "adago/harness/io.hpp"

namespace adago::harness {

Scenario parse_scenario(std::string_view name) {
    if (name == "linear_appendix_a") return Scenario::linear_appendix_a;
    if (name == "grf_regression") return Scenario::grf_regression;
    if (name == "blob_classification") return Scenario::blob_classification;
    if (name == "theorem1_sweep") return Scenario::theorem1_sweep;
    if (name == "theorem2_sweep") return Scenario::theorem2_sweep;
    if (name == "theorem3_sweep") return Scenario::theorem3_sweep;
    throw ConfigError("unknown scenario '" + std::string(name) + "'");
}

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
    case Scenario::linear_appendix_a: return "linear_appendix_a";
    case Scenario::blob_classification: return "blob_classification";
    case Scenario::theorem1_sweep: return "theorem1_sweep";
    case Scenario::theorem2_sweep: return "theorem2_sweep";
    case Scenario::theorem3_sweep: return "theorem3_sweep";
    case Scenario::grf_regression: break;
    }
    return "grf_regression";
}

namespace {

bool is_linear(Scenario s) {
    return s == Scenario::linear_appendix_a || s == Scenario::theorem1_sweep || s == Scenario::theorem2_sweep ||
           s == Scenario::theorem3_sweep;
}

data::DatasetKind expected_kind(Scenario s) {
    if (is_linear(s)) return data::DatasetKind::linear_regression;
    if (s == Scenario::blob_classification) return data::DatasetKind::gaussian_blobs;
    return data::DatasetKind::grf_regression;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

using optim::Method;

bool uses_adago(Method m) { return m == Method::adago || m == Method::hybrid_adago; }
bool uses_momentum(Method m) { return m == Method::muon || m == Method::hybrid_muon || uses_adago(m); }
bool uses_adam(Method m) { return m == Method::adam || m == Method::hybrid_muon || m == Method::hybrid_adago; }
bool orthogonalizes(Method m) { return m == Method::ogd || uses_momentum(m); }
bool hybrid(Method m) { return m == Method::hybrid_muon || m == Method::hybrid_adago; }

std::size_t lead_matrix(const models::ParamSet& params) {
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].kind == models::ParamKind::matrix) return i;
    return 0;
}

bool loss_ok(double loss) { return std::isfinite(loss) && loss <= kDivergenceThreshold; }

// Per-parameter AdaGO telemetry, one entry per step.
struct AdaptiveTrace {
    std::size_t index = 0;
    std::vector<double> stepsize, v, increment;
};

InvariantReport check_invariants(const std::vector<AdaptiveTrace>& traces, const optim::OptimizerConfig& cfg) {
    InvariantReport rep;
    if (traces.empty()) return rep;
    rep.checked = true;
    const double gamma_sq = cfg.gamma * cfg.gamma;
    const double v0_sq = cfg.v0 * cfg.v0;
    auto note = [&](bool& flag, const std::string& msg) {
        if (flag) rep.detail += (rep.detail.empty() ? "" : "; ") + msg;
        flag = false;
    };
    for (const auto& tr : traces) {
        const std::string tag = "param " + std::to_string(tr.index);
        double prev_v = cfg.v0;
        double lhs = 0.0;
        std::vector<double> seq{v0_sq};
        for (std::size_t t = 0; t < tr.v.size(); ++t) {
            const std::string at = tag + " step " + std::to_string(t + 1);
            if (!(tr.stepsize[t] >= cfg.epsilon)) note(rep.stepsize_floor, at + ": stepsize below epsilon");
            if (tr.v[t] < prev_v) note(rep.v_monotone, at + ": v decreased");
            // v_t² − v_{t−1}² is formed by subtraction; allow its rounding error.
            const double slack = 4.0 * std::numeric_limits<double>::epsilon() * tr.v[t] * tr.v[t];
            if (tr.increment[t] > gamma_sq + slack) note(rep.increment_bounded, at + ": increment above gamma^2");
            lhs += tr.increment[t] / (tr.v[t] * tr.v[t]);
            seq.push_back(tr.increment[t]);
            prev_v = tr.v[t];
        }
        const double horizon = static_cast<double>(std::max<std::size_t>(tr.v.size(), 1));
        const double rhs = std::log(gamma_sq * horizon / v0_sq) + 1.0;
        const bool direct = diagnostics::log_sum_bound_check(seq).holds;
        if (lhs - rhs > rep.log_sum_lhs - rep.log_sum_rhs || (rep.log_sum_lhs == 0.0 && rep.log_sum_rhs == 0.0)) {
            rep.log_sum_lhs = lhs;
            rep.log_sum_rhs = rhs;
        }
        if (!(lhs <= rhs + 1e-12) || !direct) note(rep.log_sum_bound, tag + ": log-sum bound violated");
    }
    return rep;
}

} // namespace

void ExperimentConfig::validate() const {
    if (steps < 1 && epochs < 1) throw ConfigError("experiment: steps must be at least 1");
    if (seeds.empty()) throw ConfigError("experiment: at least one seed is required");
    if (log_every < 1) throw ConfigError("experiment: log_every must be at least 1");
    if (hidden < 1) throw ConfigError("experiment: hidden width must be positive");
    if (batch.kind == data::ScheduleKind::constant && batch.size < 1)
        throw ConfigError("experiment: batch size must be positive");
    optim.validate();
    dataset.validate();
    if (dataset.kind != expected_kind(scenario))
        throw ConfigError("experiment: scenario " + std::string(to_string(scenario)) + " needs a " +
                          std::string(data::to_string(expected_kind(scenario))) + " dataset");
    if (scenario == Scenario::blob_classification && dataset.d_out < 2)
        throw ConfigError("experiment: classification needs at least two classes");
}

std::uint64_t ExperimentConfig::resolved_steps() const {
    if (scenario == Scenario::blob_classification && epochs > 0) {
        const std::size_t n = dataset.n_train();
        const std::size_t b = batch.batch_size(1, n);
        return epochs * ((n + b - 1) / b);
    }
    return steps;
}

std::string ExperimentConfig::hyperparameter_string() const {
    const Method m = optimizer;
    std::string s = "eta=" + num(optim.eta);
    if (uses_momentum(m)) s += ";mu=" + num(optim.mu);
    if (uses_adago(m)) {
        s += ";gamma=" + num(optim.gamma) + ";eps=" + num(optim.epsilon) + ";v0=" + num(optim.v0) + ";norm=" +
             std::string(optim::to_string(optim.norm));
    }
    if (m == Method::adagrad_norm) s += ";v0=" + num(optim.v0);
    if (uses_adam(m)) s += ";beta1=" + num(optim.beta1) + ";beta2=" + num(optim.beta2);
    if (hybrid(m)) s += ";aux_eta=" + num(optim.aux_eta);
    if (orthogonalizes(m)) s += ";ns_iters=" + std::to_string(optim.ns_iters);
    return s;
}

ExperimentConfig scenario_defaults(Scenario scenario) {
    ExperimentConfig cfg;
    cfg.scenario = scenario;
    cfg.dataset.kind = expected_kind(scenario);
    switch (scenario) {
    case Scenario::linear_appendix_a:
    case Scenario::theorem1_sweep:
    case Scenario::theorem2_sweep:
    case Scenario::theorem3_sweep:
        cfg.dataset.n_samples = 200;
        cfg.dataset.d_in = 20;
        cfg.dataset.d_out = 10;
        cfg.optimizer = scenario == Scenario::linear_appendix_a ? Method::ogd : Method::adago;
        cfg.optim.eta = 0.01;
        cfg.batch = data::BatchSchedule::full();
        cfg.steps = 1000;
        cfg.log_every = 1;
        break;
    case Scenario::blob_classification:
        cfg.dataset.n_samples = 2000;
        cfg.dataset.d_in = 20;
        cfg.dataset.d_out = 10;
        cfg.optimizer = Method::hybrid_adago;
        cfg.optim.eta = 0.05;
        cfg.optim.epsilon = 5e-4;
        cfg.epochs = 10;
        cfg.log_every = 10;
        break;
    case Scenario::grf_regression:
        cfg.optimizer = Method::hybrid_adago;
        cfg.optim.eta = 0.5;
        cfg.optim.epsilon = 5e-3;
        cfg.log_every = 10;
        break;
    }
    return cfg;
}

models::ModelSpec model_for(const ExperimentConfig& cfg) {
    const auto& d = cfg.dataset;
    if (is_linear(cfg.scenario)) return models::ModelSpec::linear(d.d_out, d.d_in);
    if (cfg.scenario == Scenario::blob_classification)
        return models::ModelSpec::mlp(d.d_in, cfg.hidden, d.d_out, models::LossKind::cross_entropy);
    return models::ModelSpec::mlp(d.d_in, cfg.hidden, d.d_out, models::LossKind::mse);
}

Problem build_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
    Problem pb;
    pb.model = model_for(cfg);
    data::DatasetSpec spec = cfg.dataset;
    spec.seed = cfg.dataset.seed + seed;
    if (spec.kind == data::DatasetKind::linear_regression) {
        auto lp = data::generate_linear(spec);
        pb.data = std::move(lp.data);
        pb.w_star = std::move(lp.w_star);
        pb.design = std::move(lp.design);
        pb.init = models::init_params(pb.model, seed);
        pb.init.mutable_value(0) = Matrix(spec.d_out, spec.d_in); // W₀ = 0
    } else {
        pb.data = data::generate(spec);
        pb.init = models::init_params(pb.model, seed);
    }
    return pb;
}

SeedRun run_seed(const ExperimentConfig& cfg, std::uint64_t seed, const StepObserver& observer) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Problem pb = build_problem(cfg, seed);
    const auto& train = pb.data.train;
    const auto& test = pb.data.test;
    const bool half_sum = pb.model.reduction == models::Reduction::half_sum;

    SeedRun run;
    run.seed = seed;
    models::ParamSet params = pb.init;
    models::ParamSet scratch = pb.init;
    optim::Optimizer opt(cfg.optimizer, cfg.optim);
    const std::size_t lead = lead_matrix(params);
    std::vector<AdaptiveTrace> traces;

    const std::uint64_t horizon = cfg.resolved_steps();
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const auto batch = data::sample_minibatch(train, cfg.batch, seed, t, half_sum);
        const bool full_batch = batch.size() == train.size();
        const bool log = (t - 1) % cfg.log_every == 0 || t == horizon;

        double full_nuclear = 0.0;
        if (log && !full_batch) {
            scratch.set_values(params.values());
            models::loss_and_grad(pb.model, scratch, train);
            const auto g = scratch.grads();
            full_nuclear = diagnostics::block_nuclear_norm(g);
        }
        const double batch_loss = models::loss_and_grad(pb.model, params, batch);
        const auto grads = params.grads();
        bool finite = loss_ok(batch_loss);
        for (const auto& g : grads) finite = finite && g.all_finite();
        if (!finite) {
            run.diverged = true;
            run.divergence_reason = "loss or gradient blew up at step " + std::to_string(t);
            break;
        }
        if (log && full_batch) full_nuclear = diagnostics::block_nuclear_norm(grads);

        std::optional<models::ParamSet> before;
        if (observer) before = params;
        std::vector<optim::ParamStepReport> reports;
        try {
            reports = opt.step(params);
        } catch (const NumericFailure& e) {
            run.diverged = true;
            run.divergence_reason = std::string("numeric failure at step ") + std::to_string(t) + ": " + e.what();
            break;
        }
        run.steps_completed = t;

        if (traces.empty()) {
            for (const auto& r : reports)
                if (optim::is_adaptive(r.rule)) traces.push_back({r.index, {}, {}, {}});
        }
        for (auto& tr : traces) {
            const auto& rep = reports[tr.index].report;
            tr.stepsize.push_back(rep.stepsize);
            tr.v.push_back(rep.v_after);
            tr.increment.push_back(rep.accum_increment);
        }
        const auto& lead_report = reports[lead].report;
        if (optim::is_adaptive(reports[lead].rule)) run.lead_increments.push_back(lead_report.accum_increment);

        if (log) {
            diagnostics::StepRecord rec;
            rec.t = t;
            rec.train_loss = models::loss_only(pb.model, params, train);
            if (test.size() > 0) rec.test_loss = models::loss_only(pb.model, params, test);
            rec.grad_norm_f = diagnostics::block_frobenius_norm(grads);
            rec.grad_norm_nuclear = full_nuclear;
            rec.stepsize = lead_report.stepsize;
            rec.v = lead_report.v_after;
            rec.accum_increment = lead_report.accum_increment;
            rec.clamped = lead_report.clamped;
            rec.floored = lead_report.floored;
            rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            run.trajectory.append(rec);
            if (!loss_ok(rec.train_loss)) {
                run.diverged = true;
                run.divergence_reason = "training loss blew up at step " + std::to_string(t);
            }
        }
        if (observer) observer(StepContext{seed, t, *before, params, reports, batch});
        if (run.diverged) break;
    }

    run.final_train_loss = models::loss_only(pb.model, params, train);
    run.final_test_loss = test.size() > 0 ? models::loss_only(pb.model, params, test)
                                          : std::numeric_limits<double>::quiet_NaN();
    if (!run.diverged && !loss_ok(run.final_train_loss)) {
        run.diverged = true;
        run.divergence_reason = "final training loss blew up";
    }
    run.invariants = check_invariants(traces, cfg.optim);
    run.final_params = std::move(params);
    return run;
}

SummaryRow summarize(const ExperimentConfig& cfg, const std::vector<SeedRun>& runs) {
    SummaryRow row;
    row.optimizer = std::string(optim::to_string(cfg.optimizer));
    row.scenario = std::string(to_string(cfg.scenario));
    row.hyperparameters = cfg.hyperparameter_string();
    row.batch = cfg.batch.to_string();
    row.steps = cfg.resolved_steps();
    row.n_seeds = runs.size();
    std::vector<double> train, test;
    for (const auto& r : runs) {
        if (r.diverged) {
            ++row.n_diverged;
            continue;
        }
        train.push_back(r.final_train_loss);
        test.push_back(r.final_test_loss);
    }
    auto mean_std = [](const std::vector<double>& xs, double& mean, double& sd) {
        if (xs.empty()) {
            mean = sd = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        const double n = static_cast<double>(xs.size());
        mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    };
    mean_std(train, row.final_train_mean, row.final_train_std);
    mean_std(test, row.final_test_mean, row.final_test_std);
    return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    const std::size_t n = cfg.seeds.size();
    result.runs.resize(n);
    std::vector<std::exception_ptr> errors(n);

    // Seeds are independent; results land in seed order so aggregation is deterministic.
#pragma omp parallel for schedule(dynamic, 1) if (cfg.parallel_seeds && n > 1)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            result.runs[i] = run_seed(cfg, cfg.seeds[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (const auto& r : result.runs) {
        r.trajectory.validate();
        if (!r.invariants.ok())
            throw ContractViolation("seed " + std::to_string(r.seed) + ": " + r.invariants.detail);
    }
    result.summary = summarize(cfg, result.runs);
    if (!cfg.output_dir.empty()) write_experiment(cfg.output_dir, result);
    return result;
}

} // namespace adago::harness
