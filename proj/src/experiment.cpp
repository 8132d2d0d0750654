#include "pregwa/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "pregwa/svg.hpp"

namespace pregwa {

namespace {

double uniform_rate_or_zero(const ScenarioConfig& sc) {
  if (sc.sessions.empty()) return 0.0;
  const double v = sc.sessions.front().streaming_rate_bps;
  for (const auto& s : sc.sessions)
    if (s.streaming_rate_bps != v) return 0.0;
  return v;
}

}  // namespace

ResultRow result_row(const ScenarioConfig& sc, const RunResult& rr,
                     std::optional<double> es_mean_airtime) {
  ResultRow row;
  row.scenario_id = sc.name;
  row.strategy = rr.plan.strategy;
  row.streaming_rate_bps = uniform_rate_or_zero(sc);
  row.n_users = sc.n_users();
  row.status = to_string(rr.status);
  if (rr.ok()) {
    row.mean_airtime = rr.network_mean_airtime;
    row.stall_slots = rr.verification.total_stall_slots;
    for (const double b : rr.verification.undelivered_bits) row.undelivered_bits += b;
    if (es_mean_airtime && *es_mean_airtime > 0.0)
      row.reduction_vs_es = (*es_mean_airtime - rr.network_mean_airtime) / *es_mean_airtime;
    if (rr.energy) row.energy_proxy = rr.energy->total_watt_s;
  }
  return row;
}

namespace {

ResultRow run_one(const ScenarioConfig& sc, const RunOptions& base, Strategy strategy) {
  RunOptions opts = base;
  opts.strategy = strategy;
  opts.keep_buffers = false;
  const RunResult rr = run(sc, opts);

  std::optional<double> es_mean;
  if (strategy == Strategy::equal_share) {
    if (rr.ok()) es_mean = rr.network_mean_airtime;
  } else {
    RunOptions es_opts = base;
    es_opts.strategy = Strategy::equal_share;
    es_opts.keep_buffers = false;
    es_opts.power.reset();
    const RunResult es = run(sc, es_opts);
    if (es.ok()) es_mean = es.network_mean_airtime;
  }
  return result_row(sc, rr, es_mean);
}

}  // namespace

RunArtifacts run_experiment(const LoadedExperiment& exp, const OutputOptions& out) {
  std::filesystem::create_directories(out.out_dir);
  const ScenarioConfig& sc = exp.scenario;

  RunOptions opts = exp.options;
  opts.keep_buffers = out.dump_buffers;
  const RunResult rr = run(sc, opts);

  std::optional<double> es_mean;
  if (exp.options.strategy == Strategy::equal_share) {
    if (rr.ok()) es_mean = rr.network_mean_airtime;
  } else {
    RunOptions es_opts = exp.options;
    es_opts.strategy = Strategy::equal_share;
    es_opts.keep_buffers = false;
    es_opts.power.reset();
    const RunResult es = run(sc, es_opts);
    if (es.ok()) es_mean = es.network_mean_airtime;
  }

  RunArtifacts artifacts;
  artifacts.row = result_row(sc, rr, es_mean);
  artifacts.per_bs_mean_airtime = rr.per_bs_mean_airtime;
  write_results_csv(out.out_dir / "results.csv",
                    std::span<const ResultRow>(&artifacts.row, 1));

  if (out.dump_plan || out.dump_buffers || out.dump_rates || out.dump_lp) {
    std::vector<int> active;
    for (int j = 0; j < sc.layout.n_bs(); ++j)
      if (std::find(opts.off_bs.begin(), opts.off_bs.end(), j) == opts.off_bs.end())
        active.push_back(j);
    const RateMatrix rates = opts.off_bs.empty() ? build_rate_matrix(sc)
                                                 : build_rate_matrix_forced(sc, active);
    if (out.dump_rates) write_rates_csv(out.out_dir / "rates.csv", sc, rates);
    if (out.dump_lp && (opts.strategy == Strategy::optimal ||
                        opts.strategy == Strategy::optimal_bs_off)) {
      OptimalOptions lp_opts;
      lp_opts.soft = opts.soft;
      lp_opts.lambda = opts.soft_lambda;
      const AirtimeLp inst = build_airtime_lp(sc, rates, lp_opts);
      std::ofstream lp_out(out.out_dir / (sc.name + ".lp"));
      if (!lp_out) throw ConfigError("cannot write LP dump");
      lp::write_lp_format(lp_out, inst.lp, sc.name);
    }
    if (rr.ok()) {
      if (out.dump_plan)
        write_plan_csv(out.out_dir / ("plan_" + rr.plan.strategy + ".csv"), rr.plan, sc, rates);
      if (out.dump_buffers)
        write_buffer_csv(out.out_dir / ("buffers_" + rr.plan.strategy + ".csv"), rr, sc, rates);
    }
  }
  return artifacts;
}

SweepOutcome run_sweep(const SweepSpec& spec, const OutputOptions& out, int workers) {
  std::filesystem::create_directories(out.out_dir);
  const std::size_t n_tasks = spec.values.size() * spec.strategies.size();
  std::vector<ResultRow> rows(n_tasks);

  // Scenarios are instantiated once per swept value and shared read-only.
  std::vector<ScenarioConfig> scenarios;
  scenarios.reserve(spec.values.size());
  for (const double v : spec.values) scenarios.push_back(apply_sweep_value(spec, v));

  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(n_tasks)));
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t vi = task / spec.strategies.size();
      const std::size_t si = task % spec.strategies.size();
      ResultRow row;
      try {
        row = run_one(scenarios[vi], spec.base.options, spec.strategies[si]);
      } catch (const std::exception& e) {
        row.scenario_id = scenarios[vi].name;
        row.strategy = to_string(spec.strategies[si]);
        row.streaming_rate_bps = uniform_rate_or_zero(scenarios[vi]);
        row.n_users = scenarios[vi].n_users();
        row.status = std::string("error: ") + e.what();
      }
      if (spec.parameter == SweepSpec::Parameter::n_users)
        row.scenario_id = spec.name + "_u" + std::to_string(scenarios[vi].n_users());
      else
        row.scenario_id = spec.name + "_v" + std::to_string(vi);
      rows[task] = std::move(row);
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SweepOutcome outcome;
  outcome.rows = std::move(rows);
  for (const auto& r : outcome.rows)
    if (r.status != "ok") ++outcome.failed_rows;

  outcome.results_csv = out.out_dir / (spec.name + "_results.csv");
  write_results_csv(outcome.results_csv, outcome.rows);

  LineChart chart;
  const bool user_sweep = spec.parameter == SweepSpec::Parameter::n_users;
  chart.title = spec.name;
  chart.x_label = user_sweep ? "number of users" : "streaming rate [Mbps]";
  chart.y_label = "mean network air-time per slot";
  for (const double v : spec.values) chart.x.push_back(user_sweep ? v : v / 1e6);
  for (std::size_t si = 0; si < spec.strategies.size(); ++si) {
    ChartSeries series;
    series.label = to_string(spec.strategies[si]);
    for (std::size_t vi = 0; vi < spec.values.size(); ++vi) {
      const auto& row = outcome.rows[vi * spec.strategies.size() + si];
      series.y.push_back(row.status == "ok" ? row.mean_airtime
                                            : std::numeric_limits<double>::quiet_NaN());
    }
    chart.series.push_back(std::move(series));
  }
  outcome.chart_svg = out.out_dir / (spec.name + ".svg");
  write_svg_chart(outcome.chart_svg, chart);
  return outcome;
}

VerifyOutcome verify_plan_file(const std::filesystem::path& plan_csv,
                               const std::filesystem::path& config_path) {
  VerifyOutcome out;
  const LoadedExperiment exp = load_experiment(config_path);
  const PlanDump dump = read_plan_csv(plan_csv);
  const ScenarioConfig& sc = exp.scenario;

  std::vector<int> active;
  for (int j = 0; j < sc.layout.n_bs(); ++j)
    if (std::find(exp.options.off_bs.begin(), exp.options.off_bs.end(), j) ==
        exp.options.off_bs.end())
      active.push_back(j);
  const RateMatrix rates = exp.options.off_bs.empty()
                               ? build_rate_matrix(sc)
                               : build_rate_matrix_forced(sc, active);

  if (dump.horizon > sc.horizon_slots) {
    out.message = "dimension mismatch: plan has " + std::to_string(dump.horizon) +
                  " slots, scenario has " + std::to_string(sc.horizon_slots);
    return out;
  }

  AllocationPlan plan(dump.strategy.empty() ? "dumped" : dump.strategy, sc.n_users(),
                      sc.horizon_slots);
  for (std::size_t i = 0; i < dump.user_ids.size(); ++i) {
    int u = -1;
    for (int k = 0; k < sc.n_users(); ++k)
      if (sc.traces[static_cast<std::size_t>(k)].user_id == dump.user_ids[i]) u = k;
    if (u < 0) {
      out.message = "dimension mismatch: plan user " + std::to_string(dump.user_ids[i]) +
                    " is not in the scenario";
      return out;
    }
    for (int t = 0; t < dump.horizon; ++t)
      plan.set(u, t,
               dump.x[i * static_cast<std::size_t>(dump.horizon) + static_cast<std::size_t>(t)]);
  }

  const VerifyReport rep = verify_plan(plan, sc, rates);
  out.stall_slots = rep.total_stall_slots;
  if (!rep.invariants_ok) {
    const auto& v = *rep.first_violation;
    out.message = v.constraint + " violated at user=" + std::to_string(v.user) +
                  " bs=" + std::to_string(v.bs) + " slot=" + std::to_string(v.slot) +
                  " amount=" + std::to_string(v.amount);
    return out;
  }
  out.ok = true;
  return out;
}

}  // namespace pregwa
