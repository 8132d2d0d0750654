#include "pregwa/config_io.hpp"

#include <fstream>

#include <json.hpp>

namespace pregwa {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw ConfigError("config: " + what); }

json parse(const std::string& text, const std::string& where) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("invalid JSON in " + where);
  return j;
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse(text, path.string());
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) bad(std::string(key) + " must be a number");
  return j.at(key).get<double>();
}

double num_req(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) bad(std::string(key) + " (number) is required");
  return j.at(key).get<double>();
}

RadioConfig parse_radio(const json& j) {
  RadioConfig r;
  r.tx_power_dbm = num(j, "tx_power_dbm", r.tx_power_dbm);
  r.bandwidth_hz = num(j, "bandwidth_hz", r.bandwidth_hz);
  r.noise_psd_dbm_hz = num(j, "noise_psd_dbm_hz", r.noise_psd_dbm_hz);
  r.noise_figure_db = num(j, "noise_figure_db", r.noise_figure_db);
  r.snr_cap_db = num(j, "snr_cap_db", r.snr_cap_db);
  r.pl_intercept_db = num(j, "pl_intercept_db", r.pl_intercept_db);
  r.pl_slope_db_per_decade = num(j, "pl_slope_db_per_decade", r.pl_slope_db_per_decade);
  r.min_distance_m = num(j, "min_distance_m", r.min_distance_m);
  return r;
}

RoadLayout parse_layout(const json& j) {
  RoadLayout l;
  l.length_m = num_req(j, "length_m");
  if (j.contains("one_way")) l.one_way = j.at("one_way").get<bool>();
  if (!j.contains("bs") || !j.at("bs").is_array()) bad("layout.bs (array) is required");
  for (const auto& b : j.at("bs"))
    l.bs_sites.push_back({num_req(b, "along_m"), num(b, "offset_m", 0.0)});
  return l;
}

void build_uniform_sessions(ScenarioConfig& sc, const UniformSessions& u) {
  sc.sessions.clear();
  for (const auto& tr : sc.traces) {
    VideoSession s;
    s.user_id = tr.user_id;
    s.streaming_rate_bps = u.streaming_rate_bps;
    s.total_bits = u.streaming_rate_bps * sc.slot_s * u.duration_slots;
    s.start_slot = tr.entry_slot + u.start_delay_slots;
    sc.sessions.push_back(s);
  }
}

LoadedExperiment parse_experiment(const json& j, const std::filesystem::path& base_dir) {
  LoadedExperiment exp;
  ScenarioConfig& sc = exp.scenario;
  if (j.contains("name")) sc.name = j.at("name").get<std::string>();
  sc.horizon_slots = static_cast<int>(num_req(j, "horizon_slots"));
  sc.slot_s = num(j, "slot_s", 1.0);
  sc.seed = static_cast<std::uint64_t>(num(j, "seed", 0.0));
  if (!j.contains("layout")) bad("layout is required");
  sc.layout = parse_layout(j.at("layout"));
  if (j.contains("radio")) sc.radio = parse_radio(j.at("radio"));

  if (!j.contains("traces")) bad("traces is required");
  const json& tj = j.at("traces");
  if (tj.contains("generate")) {
    const json& g = tj.at("generate");
    TraceGenParams p;
    p.n_users = static_cast<int>(num_req(g, "n_users"));
    p.speed_min_mps = num(g, "speed_min_mps", p.speed_min_mps);
    p.speed_max_mps = num(g, "speed_max_mps", p.speed_max_mps);
    p.arrival_spread_slots = static_cast<int>(num(g, "arrival_spread_slots", 0.0));
    sc.traces = generate_traces(sc.layout, p, sc.horizon_slots, sc.slot_s, sc.seed);
    exp.recipe.generator = p;
  } else if (tj.contains("file")) {
    sc.traces = load_traces(base_dir / tj.at("file").get<std::string>());
  } else if (tj.contains("explicit")) {
    for (const auto& e : tj.at("explicit")) {
      MobilityTrace tr;
      tr.user_id = static_cast<int>(num_req(e, "user_id"));
      tr.entry_slot = static_cast<int>(num(e, "entry_slot", 0.0));
      tr.speed_mps = num(e, "speed_mps", 0.0);
      for (const auto& p : e.at("positions")) tr.positions_m.push_back(p.get<double>());
      sc.traces.push_back(std::move(tr));
    }
  } else {
    bad("traces needs one of: generate, file, explicit");
  }

  if (!j.contains("sessions")) bad("sessions is required");
  const json& sj = j.at("sessions");
  if (sj.contains("uniform")) {
    const json& u = sj.at("uniform");
    UniformSessions us;
    us.streaming_rate_bps = num_req(u, "streaming_rate_bps");
    us.duration_slots = num_req(u, "duration_slots");
    us.start_delay_slots = static_cast<int>(num(u, "start_delay_slots", 0.0));
    build_uniform_sessions(sc, us);
    exp.recipe.uniform = us;
  } else if (sj.contains("explicit")) {
    for (const auto& e : sj.at("explicit")) {
      VideoSession s;
      s.user_id = static_cast<int>(num_req(e, "user_id"));
      s.streaming_rate_bps = num_req(e, "streaming_rate_bps");
      s.total_bits = num_req(e, "total_bits");
      s.start_slot = static_cast<int>(num(e, "start_slot", 0.0));
      sc.sessions.push_back(s);
    }
  } else {
    bad("sessions needs one of: uniform, explicit");
  }

  if (j.contains("strategy")) {
    const json& st = j.at("strategy");
    if (st.contains("name")) exp.options.strategy = strategy_from_string(st.at("name").get<std::string>());
    if (st.contains("soft")) exp.options.soft = st.at("soft").get<bool>();
    exp.options.soft_lambda = num(st, "lambda", exp.options.soft_lambda);
    if (st.contains("off_bs"))
      for (const auto& b : st.at("off_bs")) exp.options.off_bs.push_back(b.get<int>());
  }
  if (j.contains("power")) {
    PowerModel pm;
    pm.idle_w = num(j.at("power"), "idle_w", pm.idle_w);
    pm.load_slope_w = num(j.at("power"), "load_slope_w", pm.load_slope_w);
    pm.deep_sleep_w = num(j.at("power"), "deep_sleep_w", pm.deep_sleep_w);
    exp.options.power = pm;
  }

  sc.validate();
  return exp;
}

}  // namespace

namespace {

// json::at and typed get() throw library exceptions on schema mistakes; keep
// them inside the config-error domain.
template <typename Fn>
auto schema_guard(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

}  // namespace

LoadedExperiment load_experiment(const std::filesystem::path& path) {
  return schema_guard([&] { return parse_experiment(read_file(path), path.parent_path()); });
}

LoadedExperiment load_experiment_text(const std::string& json_text,
                                      const std::filesystem::path& base_dir) {
  return schema_guard([&] { return parse_experiment(parse(json_text, "inline config"), base_dir); });
}

void reseed_experiment(LoadedExperiment& exp, std::uint64_t seed) {
  exp.scenario.seed = seed;
  if (exp.recipe.generator) {
    exp.scenario.traces = generate_traces(exp.scenario.layout, *exp.recipe.generator,
                                          exp.scenario.horizon_slots, exp.scenario.slot_s, seed);
    if (exp.recipe.uniform) {
      build_uniform_sessions(exp.scenario, *exp.recipe.uniform);
    }
    exp.scenario.validate();
  }
}

namespace {

SweepSpec parse_sweep(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  SweepSpec spec;
  if (j.contains("name")) spec.name = j.at("name").get<std::string>();
  if (!j.contains("base")) bad("sweep: base is required");
  if (j.at("base").is_string())
    spec.base = load_experiment(base_dir / j.at("base").get<std::string>());
  else
    spec.base = parse_experiment(j.at("base"), base_dir);

  const std::string param = j.value("parameter", "streaming_rate");
  if (param == "streaming_rate")
    spec.parameter = SweepSpec::Parameter::streaming_rate;
  else if (param == "n_users")
    spec.parameter = SweepSpec::Parameter::n_users;
  else
    bad("sweep: unknown parameter '" + param + "'");

  if (!j.contains("values") || !j.at("values").is_array() || j.at("values").empty())
    bad("sweep: values (non-empty array) is required");
  for (const auto& v : j.at("values")) spec.values.push_back(v.get<double>());

  if (!j.contains("strategies") || !j.at("strategies").is_array() || j.at("strategies").empty())
    bad("sweep: strategies (non-empty array) is required");
  for (const auto& s : j.at("strategies"))
    spec.strategies.push_back(strategy_from_string(s.get<std::string>()));
  return spec;
}

}  // namespace

SweepSpec load_sweep(const std::filesystem::path& path) {
  return schema_guard([&] { return parse_sweep(read_file(path), path.parent_path()); });
}

SweepSpec load_sweep_text(const std::string& json_text, const std::filesystem::path& base_dir) {
  return schema_guard([&] { return parse_sweep(parse(json_text, "inline sweep"), base_dir); });
}

ScenarioConfig apply_sweep_value(const SweepSpec& spec, double value) {
  ScenarioConfig sc = spec.base.scenario;
  if (spec.parameter == SweepSpec::Parameter::streaming_rate) {
    if (!spec.base.recipe.uniform)
      throw ConfigError("streaming_rate sweep requires uniform sessions");
    UniformSessions u = *spec.base.recipe.uniform;
    u.streaming_rate_bps = value;
    build_uniform_sessions(sc, u);
  } else {
    if (!spec.base.recipe.generator)
      throw ConfigError("n_users sweep requires generated traces");
    if (!spec.base.recipe.uniform)
      throw ConfigError("n_users sweep requires uniform sessions");
    TraceGenParams g = *spec.base.recipe.generator;
    g.n_users = static_cast<int>(value);
    if (g.n_users < 1) throw ConfigError("n_users sweep value must be at least 1");
    sc.traces = generate_traces(sc.layout, g, sc.horizon_slots, sc.slot_s, sc.seed);
    build_uniform_sessions(sc, *spec.base.recipe.uniform);
  }
  sc.validate();
  return sc;
}

}  // namespace pregwa
