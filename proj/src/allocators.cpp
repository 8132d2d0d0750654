#include "pregwa/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pregwa {

namespace {

// Bits are carried in Mbit inside the LPs so row norms stay near unity.
constexpr double kMbit = 1e-6;

// Grants below this fraction of a slot are noise from the capping arithmetic.
constexpr double kGrantEps = 1e-15;

struct UserWindow {
  int first = 0;
  int last = -1;  // inclusive; last < first means never in system
  DemandCurve demand;
};

std::vector<UserWindow> user_windows(const ScenarioConfig& sc, const RateMatrix& rates) {
  std::vector<UserWindow> w(static_cast<std::size_t>(sc.n_users()));
  for (int u = 0; u < sc.n_users(); ++u) {
    const auto& tr = sc.traces[static_cast<std::size_t>(u)];
    UserWindow& uw = w[static_cast<std::size_t>(u)];
    uw.first = std::max(tr.entry_slot, 0);
    uw.last = std::min(tr.exit_slot(), rates.horizon() - 1);
    // Demand stops accruing when the user leaves; the remainder is reported as
    // undelivered, not stalled.
    uw.demand = DemandCurve::for_session(sc.session_of(u), rates.horizon(), sc.slot_s,
                                         uw.last >= uw.first ? std::optional<int>(uw.last)
                                                             : std::optional<int>(0));
  }
  return w;
}

}  // namespace

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::equal_share: return "equal_share";
    case Strategy::rate_proportional: return "rate_proportional";
    case Strategy::heuristic: return "heuristic";
    case Strategy::optimal: return "optimal";
    case Strategy::optimal_bs_off: return "optimal_bs_off";
  }
  return "unknown";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "equal_share") return Strategy::equal_share;
  if (name == "rate_proportional") return Strategy::rate_proportional;
  if (name == "heuristic") return Strategy::heuristic;
  if (name == "optimal") return Strategy::optimal;
  if (name == "optimal_bs_off") return Strategy::optimal_bs_off;
  throw ConfigError("unknown strategy '" + name + "'");
}

double AllocationPlan::total_airtime() const {
  return std::accumulate(x.begin(), x.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Per-slot policies.
// ---------------------------------------------------------------------------

std::vector<double> equal_share_slot(const SlotView& view) {
  std::vector<double> out(view.users.size(), 0.0);
  int active = 0;
  for (const auto& u : view.users)
    if (u.remaining_bits() > 0.0) ++active;
  if (active == 0) return out;
  const double share = 1.0 / static_cast<double>(active);
  for (std::size_t i = 0; i < view.users.size(); ++i) {
    const auto& u = view.users[i];
    if (u.remaining_bits() <= 0.0) continue;
    double grant = share;
    if (u.rate_bits > 0.0) grant = std::min(grant, u.remaining_bits() / u.rate_bits);
    out[i] = grant;
  }
  return out;
}

std::vector<double> rate_proportional_slot(const SlotView& view) {
  std::vector<double> out(view.users.size(), 0.0);
  double rate_sum = 0.0;
  for (const auto& u : view.users)
    if (u.remaining_bits() > 0.0) rate_sum += u.rate_bits;
  if (rate_sum <= 0.0) return out;
  for (std::size_t i = 0; i < view.users.size(); ++i) {
    const auto& u = view.users[i];
    if (u.remaining_bits() <= 0.0) continue;
    double grant = u.rate_bits / rate_sum;
    if (u.rate_bits > 0.0) grant = std::min(grant, u.remaining_bits() / u.rate_bits);
    out[i] = grant;
  }
  return out;
}

std::vector<double> heuristic_slot(const SlotView& view) {
  std::vector<double> out(view.users.size(), 0.0);
  const std::size_t n = view.users.size();

  // Descending achievable rate, user id as the deterministic tie-break.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (view.users[a].rate_bits != view.users[b].rate_bits)
      return view.users[a].rate_bits > view.users[b].rate_bits;
    return view.users[a].user < view.users[b].user;
  });

  double budget = 1.0;

  // Stage 1: the minimum air-time that keeps playback continuous,
  // x = max(0, D_t - R_{t-1}) / r, truncated when the slot runs out.
  for (const std::size_t i : order) {
    if (budget <= 0.0) break;
    const auto& u = view.users[i];
    if (u.rate_bits <= 0.0) continue;
    const double need = std::max(0.0, u.demand_bits - u.delivered_bits);
    if (need <= 0.0) continue;
    const double grant = std::min(need / u.rate_bits, budget);
    if (grant <= kGrantEps) continue;
    out[i] = grant;
    budget -= grant;
  }

  // Stage 2: spend leftover air-time pre-buffering users whose rate is about
  // to drop, best rate first, each capped by its remaining content.
  for (const std::size_t i : order) {
    if (budget <= 1e-12) break;
    const auto& u = view.users[i];
    if (!u.rate_decreasing || u.rate_bits <= 0.0) continue;
    const double left = u.remaining_bits() - out[i] * u.rate_bits;
    if (left <= 0.0) continue;
    const double grant = std::min(left / u.rate_bits, budget);
    if (grant <= kGrantEps) continue;
    out[i] += grant;
    budget -= grant;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Slot-by-slot plan drivers.
// ---------------------------------------------------------------------------

namespace {

template <typename SlotPolicy>
AllocationPlan run_slotwise(const ScenarioConfig& sc, const RateMatrix& rates,
                            const std::string& tag, SlotPolicy&& policy) {
  const int n = sc.n_users();
  const int T = rates.horizon();
  AllocationPlan plan(tag, n, T);
  const auto windows = user_windows(sc, rates);
  std::vector<double> delivered(static_cast<std::size_t>(n), 0.0);

  SlotView view;
  std::vector<int> members;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < sc.layout.n_bs(); ++j) {
      view.users.clear();
      members.clear();
      for (int u = 0; u < n; ++u) {
        if (rates.bs(u, t) != j) continue;
        SlotUser su;
        su.user = sc.traces[static_cast<std::size_t>(u)].user_id;
        su.rate_bits = rates.rate(u, t);
        su.rate_decreasing = rates.rate_decreasing(u, t);
        su.demand_bits = windows[static_cast<std::size_t>(u)].demand.at(t);
        su.delivered_bits = delivered[static_cast<std::size_t>(u)];
        su.total_bits = sc.session_of(u).total_bits;
        view.users.push_back(su);
        members.push_back(u);
      }
      if (view.users.empty()) continue;
      const auto grants = policy(view);
      for (std::size_t i = 0; i < members.size(); ++i)
        plan.set(members[static_cast<std::size_t>(i)], t, grants[i]);
    }
    for (int u = 0; u < n; ++u) {
      if (!rates.in_system(u, t)) continue;
      delivered[static_cast<std::size_t>(u)] =
          accumulate(delivered[static_cast<std::size_t>(u)], plan.at(u, t), rates.rate(u, t),
                     sc.session_of(u).total_bits);
    }
  }
  return plan;
}

}  // namespace

AllocationPlan plan_equal_share(const ScenarioConfig& sc, const RateMatrix& rates) {
  return run_slotwise(sc, rates, "equal_share",
                      [](const SlotView& v) { return equal_share_slot(v); });
}

AllocationPlan plan_rate_proportional(const ScenarioConfig& sc, const RateMatrix& rates) {
  return run_slotwise(sc, rates, "rate_proportional",
                      [](const SlotView& v) { return rate_proportional_slot(v); });
}

AllocationPlan plan_heuristic(const ScenarioConfig& sc, const RateMatrix& rates) {
  return run_slotwise(sc, rates, "heuristic",
                      [](const SlotView& v) { return heuristic_slot(v); });
}

// ---------------------------------------------------------------------------
// LP builders.
// ---------------------------------------------------------------------------

namespace {

// Capacity rows only where two or more variables meet: a single bounded x <= 1
// is already captured by its bound.
void add_capacity_rows(lp::LinearProgram& p, const ScenarioConfig& sc, const RateMatrix& rates,
                       const std::vector<int>& x_var) {
  const int T = rates.horizon();
  std::vector<int> idx;
  std::vector<double> val;
  for (int t = 0; t < T; ++t) {
    for (int j = 0; j < sc.layout.n_bs(); ++j) {
      idx.clear();
      for (int u = 0; u < sc.n_users(); ++u) {
        if (rates.bs(u, t) != j) continue;
        const int v = x_var[static_cast<std::size_t>(u) * static_cast<std::size_t>(T) +
                            static_cast<std::size_t>(t)];
        if (v >= 0) idx.push_back(v);
      }
      if (idx.size() < 2) continue;
      val.assign(idx.size(), 1.0);
      p.add_row(lp::Relation::le, 1.0, idx, val);
    }
  }
}

}  // namespace

AirtimeLp build_airtime_lp(const ScenarioConfig& sc, const RateMatrix& rates,
                       const OptimalOptions& opt) {
  const int n = sc.n_users();
  const int T = rates.horizon();
  AirtimeLp inst;
  inst.n_users = n;
  inst.horizon = T;
  inst.x_var.assign(static_cast<std::size_t>(n) * T, -1);
  inst.slack_var.assign(static_cast<std::size_t>(n) * T, -1);
  const auto windows = user_windows(sc, rates);

  for (int u = 0; u < n; ++u) {
    const auto& uw = windows[static_cast<std::size_t>(u)];
    if (uw.last < uw.first) continue;
    const double cap = sc.session_of(u).total_bits;
    const double vtau = sc.session_of(u).streaming_rate_bps * sc.slot_s;

    int prev_buf = -1;
    for (int t = uw.first; t <= uw.last; ++t) {
      const std::size_t cell = static_cast<std::size_t>(u) * T + static_cast<std::size_t>(t);
      const double r = rates.rate(u, t);
      int xv = -1;
      if (r > 0.0) {
        xv = inst.lp.add_variable(0.0, 1.0, 1.0);
        inst.x_var[cell] = xv;
      }
      // Buffer level after slot t: R_t - D_t. Keeping every level at or below
      // D_i - D_t is equivalent to the single end-of-horizon content cap
      // because delivery is monotone.
      const double bhi = std::max(0.0, (cap - uw.demand.at(t)) * kMbit);
      const int bv = inst.lp.add_variable(0.0, bhi, 0.0);
      int qv = -1;
      if (opt.soft) {
        // Slack is stored in Mbit; the penalty is lambda per V*tau bits short.
        qv = inst.lp.add_variable(0.0, lp::kInf, opt.lambda / (vtau * kMbit));
        inst.slack_var[cell] = qv;
      }
      const double inc = (uw.demand.at(t) - (t > uw.first ? uw.demand.at(t - 1) : 0.0)) * kMbit;

      // b_t - b_{t-1} - r x_t (+ q terms in soft mode) = -demand increment
      std::vector<int> idx;
      std::vector<double> val;
      idx.push_back(bv);
      val.push_back(1.0);
      if (qv >= 0) {
        idx.push_back(qv);
        val.push_back(-1.0);
      }
      if (prev_buf >= 0) {
        idx.push_back(prev_buf);
        val.push_back(-1.0);
        const int prev_q = inst.slack_var[cell - 1];
        if (prev_q >= 0) {
          idx.push_back(prev_q);
          val.push_back(1.0);
        }
      }
      if (xv >= 0) {
        idx.push_back(xv);
        val.push_back(-r * kMbit);
      }
      inst.lp.add_row(lp::Relation::eq, -inc, idx, val);
      prev_buf = bv;
    }
  }
  add_capacity_rows(inst.lp, sc, rates, inst.x_var);
  return inst;
}

AirtimeLp build_airtime_lp_direct(const ScenarioConfig& sc, const RateMatrix& rates) {
  const int n = sc.n_users();
  const int T = rates.horizon();
  AirtimeLp inst;
  inst.n_users = n;
  inst.horizon = T;
  inst.x_var.assign(static_cast<std::size_t>(n) * T, -1);
  inst.slack_var.assign(static_cast<std::size_t>(n) * T, -1);
  const auto windows = user_windows(sc, rates);

  for (int u = 0; u < n; ++u) {
    const auto& uw = windows[static_cast<std::size_t>(u)];
    if (uw.last < uw.first) continue;
    for (int t = uw.first; t <= uw.last; ++t) {
      if (rates.rate(u, t) > 0.0)
        inst.x_var[static_cast<std::size_t>(u) * T + static_cast<std::size_t>(t)] =
            inst.lp.add_variable(0.0, 1.0, 1.0);
    }

    std::vector<int> idx;
    std::vector<double> val;
    double deliverable = 0.0;
    for (int t = uw.first; t <= uw.last; ++t) {
      const int v = inst.var_of(u, t);
      if (v >= 0) {
        idx.push_back(v);
        val.push_back(rates.rate(u, t) * kMbit);
        deliverable += rates.rate(u, t);
      }
      // Cumulative requirement: sum_{s<=t} r x >= D_t whenever D_t > 0. An
      // empty left-hand side (demand before any deliverable rate) is kept as a
      // structurally infeasible row rather than silently dropped.
      if (uw.demand.at(t) > 0.0)
        inst.lp.add_row(lp::Relation::ge, uw.demand.at(t) * kMbit, std::span<const int>(idx),
                        std::span<const double>(val));
    }
    const double cap = sc.session_of(u).total_bits;
    if (!idx.empty() && deliverable > cap)
      inst.lp.add_row(lp::Relation::le, cap * kMbit, idx, val);
  }
  add_capacity_rows(inst.lp, sc, rates, inst.x_var);
  return inst;
}

AllocationPlan plan_from_lp_solution(const AirtimeLp& inst, const lp::Solution& sol,
                                     const std::string& tag) {
  AllocationPlan plan(tag, inst.n_users, inst.horizon);
  plan.solver_status = sol.status;
  if (sol.status != lp::Status::optimal) return plan;
  for (int u = 0; u < inst.n_users; ++u) {
    for (int t = 0; t < inst.horizon; ++t) {
      const int v = inst.var_of(u, t);
      if (v < 0) continue;
      plan.set(u, t, std::clamp(sol.x[static_cast<std::size_t>(v)], 0.0, 1.0));
    }
  }
  return plan;
}

AllocationPlan plan_optimal(const ScenarioConfig& sc, const RateMatrix& rates,
                            const OptimalOptions& opt) {
  const AirtimeLp inst = build_airtime_lp(sc, rates, opt);
  const lp::Solution sol = lp::solve(inst.lp);
  return plan_from_lp_solution(inst, sol, "optimal");
}

}  // namespace pregwa
