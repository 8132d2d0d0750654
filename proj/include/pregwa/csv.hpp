#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pregwa/sim.hpp"

namespace pregwa {

// One line of the results CSV:
// scenario_id,strategy,streaming_rate_bps,n_users,mean_airtime,reduction_vs_es,
// stall_slots,undelivered_bits,energy_proxy,status
struct ResultRow {
  std::string scenario_id;
  std::string strategy;
  double streaming_rate_bps = 0.0;
  int n_users = 0;
  double mean_airtime = 0.0;                 // network mean air-time per slot
  std::optional<double> reduction_vs_es;     // empty when the ES baseline failed
  int stall_slots = 0;
  double undelivered_bits = 0.0;
  std::optional<double> energy_proxy;
  std::string status = "ok";
};

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows);
void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows);

// Plan dump: strategy,user_id,slot,bs,x,granted_bits — full precision so a
// dumped plan re-verifies exactly.
void write_plan_csv(std::ostream& out, const AllocationPlan& plan, const ScenarioConfig& sc,
                    const RateMatrix& rates);
void write_plan_csv(const std::filesystem::path& path, const AllocationPlan& plan,
                    const ScenarioConfig& sc, const RateMatrix& rates);

struct PlanDump {
  std::string strategy;
  std::vector<int> user_ids;  // distinct, in first-seen order
  // x by (user order index, slot)
  int horizon = 0;
  std::vector<double> x;
};

// Throws ParseError on malformed rows; dimension checks happen at verify time.
PlanDump read_plan_csv(const std::filesystem::path& path);

// Buffer trajectories: user_id,slot,delivered_bits,demand_bits,buffer_bits.
void write_buffer_csv(std::ostream& out, const RunResult& result, const ScenarioConfig& sc,
                      const RateMatrix& rates);
void write_buffer_csv(const std::filesystem::path& path, const RunResult& result,
                      const ScenarioConfig& sc, const RateMatrix& rates);

// Rate matrix dump: user_id,slot,bs,rate_bits for in-system entries.
void write_rates_csv(std::ostream& out, const ScenarioConfig& sc, const RateMatrix& rates);
void write_rates_csv(const std::filesystem::path& path, const ScenarioConfig& sc,
                     const RateMatrix& rates);

}  // namespace pregwa
