#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pregwa/lp.hpp"
#include "pregwa/radio.hpp"
#include "pregwa/traffic.hpp"

namespace pregwa {

enum class Strategy { equal_share, rate_proportional, heuristic, optimal, optimal_bs_off };

const char* to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);  // throws ConfigError

// Per-user per-slot air-time fractions x in [0,1]. Out-of-system entries are 0.
struct AllocationPlan {
  std::string strategy;
  int n_users = 0;
  int horizon = 0;
  std::vector<double> x;
  std::optional<lp::Status> solver_status;  // set by the optimal strategies

  AllocationPlan() = default;
  AllocationPlan(std::string tag, int users, int T)
      : strategy(std::move(tag)),
        n_users(users),
        horizon(T),
        x(static_cast<std::size_t>(users) * static_cast<std::size_t>(T), 0.0) {}

  double at(int u, int t) const { return x[index(u, t)]; }
  void set(int u, int t, double v) { x[index(u, t)] = v; }
  double total_airtime() const;

 private:
  std::size_t index(int u, int t) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(horizon) +
           static_cast<std::size_t>(t);
  }
};

// Everything one BS knows about one of its associated users in one slot. The
// slot policies below are pure functions of this view: a handed-over user is
// indistinguishable from a local one given the same buffer state, which is the
// distributed-information property.
struct SlotUser {
  int user = 0;
  double rate_bits = 0.0;       // r_{i,t} to this BS
  bool rate_decreasing = false; // one-bit trend, the heuristic's only look-ahead
  double demand_bits = 0.0;     // cumulative playback requirement through this slot
  double delivered_bits = 0.0;  // cumulative delivery through the previous slot
  double total_bits = 0.0;      // full video size

  double remaining_bits() const { return std::max(0.0, total_bits - delivered_bits); }
};

struct SlotView {
  std::vector<SlotUser> users;
};

// Air-time fractions aligned with view.users. Each policy enforces the BS
// budget of 1.0 and never grants beyond a user's remaining content.
std::vector<double> equal_share_slot(const SlotView& view);
std::vector<double> rate_proportional_slot(const SlotView& view);
std::vector<double> heuristic_slot(const SlotView& view);

AllocationPlan plan_equal_share(const ScenarioConfig& sc, const RateMatrix& rates);
AllocationPlan plan_rate_proportional(const ScenarioConfig& sc, const RateMatrix& rates);
AllocationPlan plan_heuristic(const ScenarioConfig& sc, const RateMatrix& rates);

struct OptimalOptions {
  bool soft = false;      // add stall slack with penalty instead of hard rows
  double lambda = 1e4;    // penalty per slot of slack, normalized by V*tau
};

// Network-air-time minimizing plan. Hard mode returns the LP status verbatim:
// an infeasible instance yields a zero plan with solver_status = infeasible.
AllocationPlan plan_optimal(const ScenarioConfig& sc, const RateMatrix& rates,
                            const OptimalOptions& opt = {});

// LP view of one instance, exposed for tests and the LP dump tool.
struct AirtimeLp {
  lp::LinearProgram lp;
  int n_users = 0;
  int horizon = 0;
  std::vector<int> x_var;      // (u, t) -> variable index, -1 when fixed to zero
  std::vector<int> slack_var;  // (u, t) -> soft-mode slack index, -1 otherwise

  int var_of(int u, int t) const {
    return x_var[static_cast<std::size_t>(u) * static_cast<std::size_t>(horizon) +
                 static_cast<std::size_t>(t)];
  }
};

// Sparse formulation used by plan_optimal: buffer-level state variables with
// three-term balance equalities; the content cap becomes a variable bound.
AirtimeLp build_airtime_lp(const ScenarioConfig& sc, const RateMatrix& rates,
                       const OptimalOptions& opt = {});

// Literal formulation with per-slot cumulative rows. Same optimum, quadratic
// nonzero count; used for tiny instances and oracle cross-checks.
AirtimeLp build_airtime_lp_direct(const ScenarioConfig& sc, const RateMatrix& rates);

AllocationPlan plan_from_lp_solution(const AirtimeLp& inst, const lp::Solution& sol,
                                     const std::string& tag);

}  // namespace pregwa
