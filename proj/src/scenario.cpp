#include "pregwa/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pregwa/rng.hpp"

namespace pregwa {

void RoadLayout::validate() const {
  if (!(length_m > 0.0)) throw ConfigError("road length must be positive");
  if (bs_sites.empty()) throw ConfigError("layout needs at least one base station");
  for (std::size_t j = 0; j < bs_sites.size(); ++j) {
    const auto& bs = bs_sites[j];
    if (bs.along_m < 0.0 || bs.along_m > length_m)
      throw ConfigError("bs " + std::to_string(j) + " along-road position outside [0, length]");
  }
}

void RadioConfig::validate() const {
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!std::isfinite(snr_cap_db)) throw ConfigError("snr cap must be finite");
  if (!(min_distance_m > 0.0)) throw ConfigError("min distance must be positive");
}

void ScenarioConfig::validate() const {
  layout.validate();
  radio.validate();
  if (horizon_slots < 1) throw ConfigError("horizon must be at least one slot");
  if (!(slot_s > 0.0)) throw ConfigError("slot duration must be positive");
  if (traces.size() != sessions.size())
    throw ConfigError("expected one session per trace (" + std::to_string(traces.size()) +
                      " traces, " + std::to_string(sessions.size()) + " sessions)");
  for (std::size_t u = 0; u < traces.size(); ++u) {
    if (traces[u].user_id != sessions[u].user_id)
      throw ConfigError("trace/session user_id mismatch at index " + std::to_string(u));
    const auto& s = sessions[u];
    if (!(s.streaming_rate_bps > 0.0))
      throw ConfigError("session for user " + std::to_string(s.user_id) +
                        ": streaming rate must be positive");
    if (!(s.total_bits > 0.0))
      throw ConfigError("session for user " + std::to_string(s.user_id) +
                        ": video size must be positive");
    const double per_slot = s.streaming_rate_bps * slot_s;
    const double slots = s.total_bits / per_slot;
    if (std::abs(slots - std::round(slots)) > 1e-6 * std::max(1.0, slots))
      throw ConfigError("session for user " + std::to_string(s.user_id) +
                        ": video size must be a whole number of slots at rate V");
  }
  validate_traces(traces, layout, slot_s);
}

std::vector<MobilityTrace> generate_traces(const RoadLayout& layout, const TraceGenParams& params,
                                           int horizon_slots, double slot_s, std::uint64_t seed) {
  layout.validate();
  if (params.n_users < 1) throw ConfigError("n_users must be at least 1");
  if (!(params.speed_max_mps > 0.0)) throw ConfigError("speed range upper bound must be positive");
  if (!(params.speed_min_mps > 0.0) || params.speed_min_mps > params.speed_max_mps ||
      params.speed_max_mps > kMaxVehicleSpeedMps)
    throw ConfigError("speed range must lie within (0, 20] m/s");
  if (params.arrival_spread_slots < 0 || params.arrival_spread_slots >= horizon_slots)
    throw ConfigError("arrival spread must lie within [0, horizon)");
  if (!(slot_s > 0.0)) throw ConfigError("slot duration must be positive");

  Rng rng(seed);
  std::vector<MobilityTrace> traces;
  traces.reserve(static_cast<std::size_t>(params.n_users));
  for (int u = 0; u < params.n_users; ++u) {
    MobilityTrace tr;
    tr.user_id = u;
    tr.entry_slot = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(params.arrival_spread_slots)));
    tr.speed_mps = params.speed_min_mps == params.speed_max_mps
                       ? params.speed_min_mps
                       : rng.uniform(params.speed_min_mps, params.speed_max_mps);
    for (int t = tr.entry_slot; t < horizon_slots; ++t) {
      const double pos = static_cast<double>(t - tr.entry_slot) * tr.speed_mps * slot_s;
      if (pos > layout.length_m) break;
      tr.positions_m.push_back(pos);
    }
    traces.push_back(std::move(tr));
  }
  return traces;
}

void validate_traces(std::span<const MobilityTrace> traces, const RoadLayout& layout,
                     double slot_s, double max_speed_mps) {
  const double max_step = max_speed_mps * slot_s * (1.0 + 1e-9);
  for (const auto& tr : traces) {
    const auto fail = [&](const std::string& what) {
      throw ConfigError("trace for user " + std::to_string(tr.user_id) + ": " + what);
    };
    if (tr.entry_slot < 0) fail("negative entry slot");
    if (tr.positions_m.empty()) fail("empty position list");
    double prev = tr.positions_m.front();
    for (std::size_t k = 0; k < tr.positions_m.size(); ++k) {
      const double p = tr.positions_m[k];
      if (p < 0.0 || p > layout.length_m) fail("position outside [0, length]");
      if (k > 0) {
        if (p < prev) fail("positions must be non-decreasing on a one-way road");
        if (p - prev > max_step) fail("position step exceeds max speed * slot duration");
      }
      prev = p;
    }
  }
}

void save_traces(std::ostream& out, std::span<const MobilityTrace> traces) {
  out << "user_id,entry_slot,speed_mps,positions\n";
  char buf[32];
  for (const auto& tr : traces) {
    out << tr.user_id << ',' << tr.entry_slot << ',';
    std::snprintf(buf, sizeof buf, "%.17g", tr.speed_mps);
    out << buf << ',';
    for (std::size_t k = 0; k < tr.positions_m.size(); ++k) {
      if (k) out << ';';
      std::snprintf(buf, sizeof buf, "%.17g", tr.positions_m[k]);
      out << buf;
    }
    out << '\n';
  }
}

void save_traces(const std::filesystem::path& path, std::span<const MobilityTrace> traces) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open trace file for writing: " + path.string());
  save_traces(out, traces);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& s, long line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in number '" + s + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("cannot parse number '" + s + "'", line);
  }
}

long parse_long(const std::string& s, long line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in integer '" + s + "'", line);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError("cannot parse integer '" + s + "'", line);
  }
}

}  // namespace

std::vector<MobilityTrace> load_traces(std::istream& in) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty trace file", 1);
  ++lineno;
  if (line != "user_id,entry_slot,speed_mps,positions")
    throw ParseError("bad trace header '" + line + "'", lineno);

  std::vector<MobilityTrace> traces;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) throw ParseError("expected 4 columns", lineno);
    MobilityTrace tr;
    tr.user_id = static_cast<int>(parse_long(cols[0], lineno));
    tr.entry_slot = static_cast<int>(parse_long(cols[1], lineno));
    tr.speed_mps = parse_double(cols[2], lineno);
    for (const auto& p : split(cols[3], ';')) {
      if (p.empty()) throw ParseError("empty position entry", lineno);
      tr.positions_m.push_back(parse_double(p, lineno));
    }
    traces.push_back(std::move(tr));
  }
  return traces;
}

std::vector<MobilityTrace> load_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file: " + path.string());
  auto traces = load_traces(in);
  return traces;
}

}  // namespace pregwa
