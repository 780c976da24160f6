#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "adago/harness/experiment.hpp"

namespace adago::harness {

inline constexpr int kSummarySchemaVersion = 1;

/// Header row plus one row per entry; numbers use %.17g, strings containing
/// commas or quotes are quoted. No timing columns, so reruns are byte-identical.
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

/// ADAGO_OUTPUT_DIR if set, otherwise "adago_runs".
std::filesystem::path default_output_dir();

/// <dir>/config.json, <dir>/trajectory_seed<k>.csv, <dir>/summary.csv.
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result);

} // namespace adago::harness
