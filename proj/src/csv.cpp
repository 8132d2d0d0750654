#include "pregwa/csv.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace pregwa {

namespace {

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, std::span<const ResultRow> rows) {
  out << "scenario_id,strategy,streaming_rate_bps,n_users,mean_airtime,reduction_vs_es,"
         "stall_slots,undelivered_bits,energy_proxy,status\n";
  for (const auto& r : rows) {
    out << r.scenario_id << ',' << r.strategy << ',' << fmt(r.streaming_rate_bps) << ','
        << r.n_users << ',' << fmt(r.mean_airtime) << ','
        << (r.reduction_vs_es ? fmt(*r.reduction_vs_es) : "") << ',' << r.stall_slots << ','
        << fmt(r.undelivered_bits) << ',' << (r.energy_proxy ? fmt(*r.energy_proxy) : "") << ','
        << r.status << '\n';
  }
}

void write_results_csv(const std::filesystem::path& path, std::span<const ResultRow> rows) {
  auto out = open_out(path);
  write_results_csv(out, rows);
}

void write_plan_csv(std::ostream& out, const AllocationPlan& plan, const ScenarioConfig& sc,
                    const RateMatrix& rates) {
  out << "strategy,user_id,slot,bs,x,granted_bits\n";
  for (int u = 0; u < plan.n_users; ++u) {
    const int uid = sc.traces[static_cast<std::size_t>(u)].user_id;
    for (int t = 0; t < plan.horizon; ++t) {
      if (!rates.in_system(u, t)) continue;
      const double x = plan.at(u, t);
      out << plan.strategy << ',' << uid << ',' << t << ',' << rates.bs(u, t) << ','
          << fmt(x, "%.17g") << ',' << fmt(x * rates.rate(u, t), "%.17g") << '\n';
    }
  }
}

void write_plan_csv(const std::filesystem::path& path, const AllocationPlan& plan,
                    const ScenarioConfig& sc, const RateMatrix& rates) {
  auto out = open_out(path);
  write_plan_csv(out, plan, sc, rates);
}

PlanDump read_plan_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file: " + path.string());
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty plan file", 1);
  ++lineno;
  if (line != "strategy,user_id,slot,bs,x,granted_bits")
    throw ParseError("bad plan header '" + line + "'", lineno);

  PlanDump dump;
  struct Cell {
    int user_idx;
    int slot;
    double x;
  };
  std::vector<Cell> cells;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<std::string, 6> col;
    std::size_t start = 0;
    for (int c = 0; c < 6; ++c) {
      const std::size_t pos = line.find(',', start);
      if (c < 5 && pos == std::string::npos) throw ParseError("expected 6 columns", lineno);
      col[static_cast<std::size_t>(c)] =
          line.substr(start, pos == std::string::npos ? pos : pos - start);
      start = pos + 1;
    }
    try {
      if (dump.strategy.empty()) dump.strategy = col[0];
      const int uid = std::stoi(col[1]);
      const int slot = std::stoi(col[2]);
      const double x = std::stod(col[4]);
      int idx = -1;
      for (std::size_t i = 0; i < dump.user_ids.size(); ++i)
        if (dump.user_ids[i] == uid) idx = static_cast<int>(i);
      if (idx < 0) {
        dump.user_ids.push_back(uid);
        idx = static_cast<int>(dump.user_ids.size()) - 1;
      }
      if (slot < 0) throw ParseError("negative slot", lineno);
      dump.horizon = std::max(dump.horizon, slot + 1);
      cells.push_back({idx, slot, x});
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      throw ParseError("cannot parse plan row", lineno);
    }
  }
  dump.x.assign(dump.user_ids.size() * static_cast<std::size_t>(dump.horizon), 0.0);
  for (const auto& c : cells)
    dump.x[static_cast<std::size_t>(c.user_idx) * static_cast<std::size_t>(dump.horizon) +
           static_cast<std::size_t>(c.slot)] = c.x;
  return dump;
}

void write_buffer_csv(std::ostream& out, const RunResult& result, const ScenarioConfig& sc,
                      const RateMatrix& rates) {
  out << "user_id,slot,delivered_bits,demand_bits,buffer_bits\n";
  for (int u = 0; u < sc.n_users(); ++u) {
    const auto& tr = sc.traces[static_cast<std::size_t>(u)];
    const int last = std::min(tr.exit_slot(), sc.horizon_slots - 1);
    const int first = std::max(tr.entry_slot, 0);
    const auto demand = DemandCurve::for_session(
        sc.session_of(u), sc.horizon_slots, sc.slot_s,
        last >= first ? std::optional<int>(last) : std::optional<int>(0));
    double cum = 0.0;
    for (int t = 0; t < sc.horizon_slots; ++t) {
      cum = accumulate(cum, result.plan.at(u, t), rates.rate(u, t), sc.session_of(u).total_bits);
      out << tr.user_id << ',' << t << ',' << fmt(cum) << ',' << fmt(demand.at(t)) << ','
          << fmt(cum - demand.at(t)) << '\n';
    }
  }
}

void write_buffer_csv(const std::filesystem::path& path, const RunResult& result,
                      const ScenarioConfig& sc, const RateMatrix& rates) {
  auto out = open_out(path);
  write_buffer_csv(out, result, sc, rates);
}

void write_rates_csv(std::ostream& out, const ScenarioConfig& sc, const RateMatrix& rates) {
  out << "user_id,slot,bs,rate_bits\n";
  for (int u = 0; u < rates.n_users(); ++u)
    for (int t = 0; t < rates.horizon(); ++t)
      if (rates.in_system(u, t))
        out << sc.traces[static_cast<std::size_t>(u)].user_id << ',' << t << ','
            << rates.bs(u, t) << ',' << fmt(rates.rate(u, t), "%.17g") << '\n';
}

void write_rates_csv(const std::filesystem::path& path, const ScenarioConfig& sc,
                     const RateMatrix& rates) {
  auto out = open_out(path);
  write_rates_csv(out, sc, rates);
}

}  // namespace pregwa
