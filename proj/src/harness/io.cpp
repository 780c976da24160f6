#include "adago/harness/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "adago/errors.hpp"

namespace adago::harness {

using nlohmann::json;

namespace {

constexpr const char* kSummaryHeader =
    "schema_version,optimizer,scenario,hyperparameters,batch,steps,n_seeds,n_diverged,final_train_mean,"
    "final_train_std,final_test_mean,final_test_std,best_grid_cell";

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else {
            cells.back() += c;
        }
    }
    return cells;
}

json schedule_json(const data::BatchSchedule& b) { return b.to_string(); }

} // namespace

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << kSummaryHeader << '\n';
    for (const auto& r : rows) {
        out << kSummarySchemaVersion << ',' << quote(r.optimizer) << ',' << quote(r.scenario) << ','
            << quote(r.hyperparameters) << ',' << quote(r.batch) << ',' << r.steps << ',' << r.n_seeds << ','
            << r.n_diverged << ',' << fmt(r.final_train_mean) << ',' << fmt(r.final_train_std) << ','
            << fmt(r.final_test_mean) << ',' << fmt(r.final_test_std) << ',' << (r.best_grid_cell ? 1 : 0) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kSummaryHeader) throw InvalidInput("summary CSV: unexpected header");
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = split_csv(line);
        if (c.size() != 13) throw InvalidInput("summary CSV: wrong column count");
        if (c[0] != std::to_string(kSummarySchemaVersion)) throw InvalidInput("summary CSV: unsupported schema version");
        try {
            SummaryRow r;
            r.optimizer = c[1];
            r.scenario = c[2];
            r.hyperparameters = c[3];
            r.batch = c[4];
            r.steps = std::stoull(c[5]);
            r.n_seeds = std::stoull(c[6]);
            r.n_diverged = std::stoull(c[7]);
            r.final_train_mean = std::stod(c[8]);
            r.final_train_std = std::stod(c[9]);
            r.final_test_mean = std::stod(c[10]);
            r.final_test_std = std::stod(c[11]);
            r.best_grid_cell = c[12] == "1";
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw InvalidInput("summary CSV: bad field in '" + line + "'");
        }
    }
    return rows;
}

std::string config_to_json(const ExperimentConfig& cfg) {
    const auto& o = cfg.optim;
    json j{
        {"scenario", to_string(cfg.scenario)},
        {"optimizer", optim::to_string(cfg.optimizer)},
        {"optim",
         {{"eta", o.eta},
          {"mu", o.mu},
          {"gamma", o.gamma},
          {"epsilon", o.epsilon},
          {"v0", o.v0},
          {"beta1", o.beta1},
          {"beta2", o.beta2},
          {"adam_eps", o.adam_eps},
          {"ns_iters", o.ns_iters},
          {"aux_eta", o.aux_eta},
          {"norm", optim::to_string(o.norm)}}},
        {"dataset", json::parse(data::spec_to_json(cfg.dataset))},
        {"hidden", cfg.hidden},
        {"steps", cfg.steps},
        {"epochs", cfg.epochs},
        {"seeds", cfg.seeds},
        {"batch", schedule_json(cfg.batch)},
        {"log_every", cfg.log_every},
        {"output_dir", cfg.output_dir},
    };
    return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        ExperimentConfig cfg = scenario_defaults(parse_scenario(j.at("scenario").get<std::string>()));
        cfg.optimizer = optim::parse_method(j.at("optimizer").get<std::string>());
        if (j.contains("optim")) {
            const auto& o = j.at("optim");
            auto& c = cfg.optim;
            c.eta = o.value("eta", c.eta);
            c.mu = o.value("mu", c.mu);
            c.gamma = o.value("gamma", c.gamma);
            c.epsilon = o.value("epsilon", c.epsilon);
            c.v0 = o.value("v0", c.v0);
            c.beta1 = o.value("beta1", c.beta1);
            c.beta2 = o.value("beta2", c.beta2);
            c.adam_eps = o.value("adam_eps", c.adam_eps);
            c.ns_iters = o.value("ns_iters", c.ns_iters);
            c.aux_eta = o.value("aux_eta", c.aux_eta);
            if (o.contains("norm")) c.norm = optim::parse_grad_norm(o.at("norm").get<std::string>());
        }
        if (j.contains("dataset")) cfg.dataset = data::spec_from_json(j.at("dataset").dump());
        cfg.hidden = j.value("hidden", cfg.hidden);
        cfg.steps = j.value("steps", cfg.steps);
        cfg.epochs = j.value("epochs", cfg.epochs);
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        if (j.contains("batch")) cfg.batch = data::BatchSchedule::parse(j.at("batch").get<std::string>());
        cfg.log_every = j.value("log_every", cfg.log_every);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON: ") + e.what());
    }
}

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("ADAGO_OUTPUT_DIR"); env && *env) return env;
    return "adago_runs";
}

void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    auto open = [](const std::filesystem::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw InvalidInput("cannot write " + p.string());
        return f;
    };
    {
        auto f = open(dir / "config.json");
        f << config_to_json(result.config) << '\n';
    }
    for (const auto& r : result.runs) {
        auto f = open(dir / ("trajectory_seed" + std::to_string(r.seed) + ".csv"));
        diagnostics::write_trajectory_csv(f, r.trajectory);
    }
    auto f = open(dir / "summary.csv");
    write_summary_csv(f, {result.summary});
}

} // namespace adago::harness
