#pragma once

#include <filesystem>

#include "pregwa/config_io.hpp"
#include "pregwa/csv.hpp"

namespace pregwa {

// Artifacts toggled by CLI flags; paths are derived from out_dir and the
// scenario/strategy names.
struct OutputOptions {
  std::filesystem::path out_dir = ".";
  bool dump_plan = false;
  bool dump_buffers = false;
  bool dump_rates = false;
  bool dump_lp = false;  // optimal strategies: LP in text interchange format
};

ResultRow result_row(const ScenarioConfig& sc, const RunResult& run_result,
                     std::optional<double> es_mean_airtime);

struct RunArtifacts {
  ResultRow row;
  std::vector<double> per_bs_mean_airtime;
};

// Run one strategy on a loaded experiment, always computing the equal-share
// baseline so reduction_vs_es is filled. Writes results.csv plus any dumps.
RunArtifacts run_experiment(const LoadedExperiment& exp, const OutputOptions& out);

struct SweepOutcome {
  std::vector<ResultRow> rows;  // deterministic (value, strategy) order
  std::filesystem::path results_csv;
  std::filesystem::path chart_svg;
  int failed_rows = 0;  // infeasible or solver-error rows; the sweep continues
};

// Fan the (value x strategy) grid over a bounded worker pool. Row order and
// file contents are independent of scheduling.
SweepOutcome run_sweep(const SweepSpec& spec, const OutputOptions& out, int workers = 1);

struct VerifyOutcome {
  bool ok = false;
  std::string message;  // first violation or dimension mismatch, empty on pass
  int stall_slots = 0;
};

// Re-verify a dumped plan against its scenario config.
VerifyOutcome verify_plan_file(const std::filesystem::path& plan_csv,
                               const std::filesystem::path& config_path);

}  // namespace pregwa
