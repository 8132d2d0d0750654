#include "pregwa/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace pregwa {

void PowerModel::validate() const {
  if (idle_w < 0.0 || load_slope_w < 0.0 || deep_sleep_w < 0.0)
    throw ConfigError("power model entries must be non-negative");
}

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::ok: return "ok";
    case RunStatus::infeasible: return "infeasible";
    case RunStatus::solver_error: return "solver_error";
  }
  return "unknown";
}

VerifyReport verify_plan(const AllocationPlan& plan, const ScenarioConfig& sc,
                         const RateMatrix& rates) {
  VerifyReport rep;
  const int n = plan.n_users;
  const int T = plan.horizon;
  const auto fail = [&](PlanViolation v) {
    if (rep.invariants_ok) {
      rep.invariants_ok = false;
      rep.first_violation = v;
    }
  };

  // Bounds and out-of-system zeros.
  for (int u = 0; u < n && rep.invariants_ok; ++u) {
    for (int t = 0; t < T; ++t) {
      const double x = plan.at(u, t);
      if (x < -1e-9 || x > 1.0 + 1e-9) {
        fail({"bounds", u, -1, t, x});
        break;
      }
      if (!rates.in_system(u, t) && x != 0.0) {
        fail({"out_of_system", u, -1, t, x});
        break;
      }
    }
  }

  // Per-BS capacity.
  for (int t = 0; t < T && rep.invariants_ok; ++t) {
    for (int j = 0; j < sc.layout.n_bs(); ++j) {
      double load = 0.0;
      for (int u = 0; u < n; ++u)
        if (rates.bs(u, t) == j) load += plan.at(u, t);
      if (load > 1.0 + 1e-6) {
        fail({"capacity", -1, j, t, load});
        break;
      }
    }
  }

  // Content caps and stall accounting, from the raw plan only.
  rep.stalls.resize(static_cast<std::size_t>(n));
  rep.undelivered_bits.assign(static_cast<std::size_t>(n), 0.0);
  for (int u = 0; u < n; ++u) {
    const auto& session = sc.session_of(u);
    const auto& trace = sc.traces[static_cast<std::size_t>(u)];
    const int last = std::min(trace.exit_slot(), T - 1);
    const int first = std::max(trace.entry_slot, 0);

    double raw = 0.0;
    std::vector<double> delivered(static_cast<std::size_t>(T), 0.0);
    for (int t = 0; t < T; ++t) {
      raw += plan.at(u, t) * rates.rate(u, t);
      delivered[static_cast<std::size_t>(t)] = std::min(raw, session.total_bits);
    }
    if (raw > session.total_bits * (1.0 + 1e-6))
      fail({"content_cap", u, -1, -1, raw - session.total_bits});

    const auto demand = DemandCurve::for_session(
        session, T, sc.slot_s, last >= first ? std::optional<int>(last) : std::optional<int>(0));
    // Stall tolerance absorbs LP round-off, which is far below one slot of video.
    const double tol = 1e-3 * session.streaming_rate_bps * sc.slot_s;
    rep.stalls[static_cast<std::size_t>(u)] = stall_report(delivered, demand.cum_bits, tol);
    rep.total_stall_slots += rep.stalls[static_cast<std::size_t>(u)].stall_slots;
    rep.undelivered_bits[static_cast<std::size_t>(u)] =
        std::max(0.0, session.total_bits - delivered[static_cast<std::size_t>(T - 1)]);
  }
  return rep;
}

EnergyBreakdown energy_proxy(const AllocationPlan& plan, const RateMatrix& rates,
                             const PowerModel& power, std::span<const int> off_bs,
                             double slot_s, int n_bs) {
  power.validate();
  EnergyBreakdown out;
  out.per_bs_watt_s.assign(static_cast<std::size_t>(n_bs), 0.0);
  std::vector<bool> off(static_cast<std::size_t>(n_bs), false);
  for (const int j : off_bs) {
    if (j < 0 || j >= n_bs) throw ConfigError("off BS index out of range");
    off[static_cast<std::size_t>(j)] = true;
  }
  for (int j = 0; j < n_bs; ++j) {
    if (off[static_cast<std::size_t>(j)]) {
      out.per_bs_watt_s[static_cast<std::size_t>(j)] =
          power.deep_sleep_w * plan.horizon * slot_s;
      continue;
    }
    double e = 0.0;
    for (int t = 0; t < plan.horizon; ++t) {
      double load = 0.0;
      for (int u = 0; u < plan.n_users; ++u)
        if (rates.bs(u, t) == j) load += plan.at(u, t);
      e += (power.idle_w + power.load_slope_w * load) * slot_s;
    }
    out.per_bs_watt_s[static_cast<std::size_t>(j)] = e;
  }
  out.total_watt_s =
      std::accumulate(out.per_bs_watt_s.begin(), out.per_bs_watt_s.end(), 0.0);
  return out;
}

RunResult run(const ScenarioConfig& sc, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  sc.validate();

  RunResult res;
  std::vector<int> active;
  for (int j = 0; j < sc.layout.n_bs(); ++j)
    if (std::find(options.off_bs.begin(), options.off_bs.end(), j) == options.off_bs.end())
      active.push_back(j);
  if (active.empty()) throw ConfigError("all base stations are switched off");
  for (const int j : options.off_bs)
    if (j < 0 || j >= sc.layout.n_bs())
      throw ConfigError("off BS index " + std::to_string(j) + " out of range");

  const RateMatrix rates = options.off_bs.empty() ? build_rate_matrix(sc)
                                                  : build_rate_matrix_forced(sc, active);

  switch (options.strategy) {
    case Strategy::equal_share:
      res.plan = plan_equal_share(sc, rates);
      break;
    case Strategy::rate_proportional:
      res.plan = plan_rate_proportional(sc, rates);
      break;
    case Strategy::heuristic:
      res.plan = plan_heuristic(sc, rates);
      break;
    case Strategy::optimal:
    case Strategy::optimal_bs_off: {
      OptimalOptions opt;
      opt.soft = options.soft;
      opt.lambda = options.soft_lambda;
      const AirtimeLp inst = build_airtime_lp(sc, rates, opt);
      const lp::Solution sol = lp::solve(inst.lp);
      res.lp_iterations = sol.iterations;
      res.plan = plan_from_lp_solution(
          inst, sol, options.strategy == Strategy::optimal_bs_off ? "optimal_bs_off" : "optimal");
      if (sol.status == lp::Status::infeasible) {
        res.status = RunStatus::infeasible;
      } else if (sol.status != lp::Status::optimal) {
        res.status = RunStatus::solver_error;
      }
      break;
    }
  }

  if (res.status != RunStatus::ok) {
    // No fabricated metrics on a failed solve; the plan (all zeros) and the
    // solver status are the result.
    res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

  res.verification = verify_plan(res.plan, sc, rates);
  if (!res.verification.invariants_ok) {
    res.status = RunStatus::solver_error;
    res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

  const int T = sc.horizon_slots;
  res.per_bs_mean_airtime.assign(static_cast<std::size_t>(sc.layout.n_bs()), 0.0);
  for (int j = 0; j < sc.layout.n_bs(); ++j) {
    double total = 0.0;
    for (int t = 0; t < T; ++t)
      for (int u = 0; u < sc.n_users(); ++u)
        if (rates.bs(u, t) == j) total += res.plan.at(u, t);
    res.per_bs_mean_airtime[static_cast<std::size_t>(j)] = total / T;
  }
  res.network_mean_airtime = std::accumulate(res.per_bs_mean_airtime.begin(),
                                             res.per_bs_mean_airtime.end(), 0.0);

  if (options.keep_buffers) {
    res.buffer_bits.assign(static_cast<std::size_t>(sc.n_users()),
                           std::vector<double>(static_cast<std::size_t>(T), 0.0));
    for (int u = 0; u < sc.n_users(); ++u) {
      const auto& session = sc.session_of(u);
      const auto& trace = sc.traces[static_cast<std::size_t>(u)];
      const int last = std::min(trace.exit_slot(), T - 1);
      const int first = std::max(trace.entry_slot, 0);
      const auto demand = DemandCurve::for_session(
          session, T, sc.slot_s, last >= first ? std::optional<int>(last) : std::optional<int>(0));
      double cum = 0.0;
      for (int t = 0; t < T; ++t) {
        cum = accumulate(cum, res.plan.at(u, t), rates.rate(u, t), session.total_bits);
        res.buffer_bits[static_cast<std::size_t>(u)][static_cast<std::size_t>(t)] =
            cum - demand.at(t);
      }
    }
  }

  if (options.power)
    res.energy = energy_proxy(res.plan, rates, *options.power, options.off_bs, sc.slot_s,
                              sc.layout.n_bs());

  res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace pregwa
