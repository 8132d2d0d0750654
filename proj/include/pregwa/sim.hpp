#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pregwa/allocators.hpp"

namespace pregwa {

// Affine BS power proxy: P0 + slope * air-time while active, deep sleep when
// switched off. Shipped defaults are an illustrative macro-BS configuration,
// not measured values.
struct PowerModel {
  double idle_w = 130.0;
  double load_slope_w = 94.0;  // watts per unit air-time
  double deep_sleep_w = 75.0;

  void validate() const;  // throws ConfigError on negative entries
};

struct PlanViolation {
  std::string constraint;  // "bounds", "capacity", "out_of_system", "content_cap"
  int user = -1;           // internal user index, -1 for per-BS checks
  int bs = -1;
  int slot = -1;
  double amount = 0.0;
};

// Independent re-check of a plan against the raw scenario data. Structural
// invariants (bounds, per-BS capacity, out-of-system zeros, content caps)
// decide pass/fail; stalls are measured and reported as data, since the
// prediction-free baselines are allowed to stall under load.
struct VerifyReport {
  bool invariants_ok = true;
  std::optional<PlanViolation> first_violation;
  std::vector<StallReport> stalls;            // per user
  std::vector<double> undelivered_bits;       // per user, D_i minus final delivery
  int total_stall_slots = 0;

  bool stall_free() const { return total_stall_slots == 0; }
};

VerifyReport verify_plan(const AllocationPlan& plan, const ScenarioConfig& sc,
                         const RateMatrix& rates);

struct EnergyBreakdown {
  std::vector<double> per_bs_watt_s;
  double total_watt_s = 0.0;
};

// Sum over slots of the affine load power for active BSs; deep sleep for the
// rest. off_bs lists the switched-off BS indices.
EnergyBreakdown energy_proxy(const AllocationPlan& plan, const RateMatrix& rates,
                             const PowerModel& power, std::span<const int> off_bs,
                             double slot_s, int n_bs);

enum class RunStatus { ok, infeasible, solver_error };

const char* to_string(RunStatus s);

struct RunOptions {
  Strategy strategy = Strategy::optimal;
  std::vector<int> off_bs;  // BSs forced off; association falls back to the rest
  bool soft = false;
  double soft_lambda = 1e4;
  std::optional<PowerModel> power;
  bool keep_buffers = true;
};

struct RunResult {
  RunStatus status = RunStatus::ok;
  AllocationPlan plan;
  VerifyReport verification;
  std::vector<double> per_bs_mean_airtime;
  double network_mean_airtime = 0.0;
  std::vector<std::vector<double>> buffer_bits;  // per user per slot when requested
  std::optional<EnergyBreakdown> energy;
  double wall_s = 0.0;
  long lp_iterations = 0;

  bool ok() const { return status == RunStatus::ok; }
};

// One full experiment: rates, plan, independent verification, metrics.
// Deterministic for a fixed (scenario, options) pair; wall_s is the only
// non-reproducible field and never reaches the CSV outputs.
RunResult run(const ScenarioConfig& sc, const RunOptions& options);

}  // namespace pregwa
