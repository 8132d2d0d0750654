#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "pregwa/experiment.hpp"
#include "pregwa/radio.hpp"
#include "pregwa/traffic.hpp"

namespace py = pybind11;
using namespace pregwa;

namespace {

py::dict run_to_dict(const ScenarioConfig& sc, const RunResult& rr, bool include_plan) {
  py::dict d;
  d["status"] = to_string(rr.status);
  d["strategy"] = rr.plan.strategy;
  d["n_users"] = sc.n_users();
  d["horizon_slots"] = sc.horizon_slots;
  if (rr.ok()) {
    d["network_mean_airtime"] = rr.network_mean_airtime;
    d["per_bs_mean_airtime"] = rr.per_bs_mean_airtime;
    d["total_airtime"] = rr.plan.total_airtime();
    int stalls = 0;
    py::list per_user;
    for (std::size_t u = 0; u < rr.verification.stalls.size(); ++u) {
      py::dict ud;
      ud["stall_slots"] = rr.verification.stalls[u].stall_slots;
      ud["max_deficit_bits"] = rr.verification.stalls[u].max_deficit_bits;
      ud["undelivered_bits"] = rr.verification.undelivered_bits[u];
      per_user.append(ud);
      stalls += rr.verification.stalls[u].stall_slots;
    }
    d["stall_slots"] = stalls;
    d["users"] = per_user;
    if (rr.energy) {
      d["energy_total_watt_s"] = rr.energy->total_watt_s;
      d["energy_per_bs_watt_s"] = rr.energy->per_bs_watt_s;
    }
    d["lp_iterations"] = rr.lp_iterations;
    if (include_plan) {
      py::list plan;
      for (int u = 0; u < rr.plan.n_users; ++u) {
        py::list row;
        for (int t = 0; t < rr.plan.horizon; ++t) row.append(rr.plan.at(u, t));
        plan.append(row);
      }
      d["plan_x"] = plan;
    }
    if (!rr.buffer_bits.empty()) d["buffer_bits"] = rr.buffer_bits;
  }
  return d;
}

RunOptions options_from_kwargs(RunOptions base, const std::string& strategy,
                               const std::optional<std::vector<int>>& off_bs,
                               std::optional<bool> soft, std::optional<double> lam) {
  if (!strategy.empty()) base.strategy = strategy_from_string(strategy);
  if (off_bs) base.off_bs = *off_bs;
  if (soft) base.soft = *soft;
  if (lam) {
    base.soft_lambda = *lam;
    base.soft = true;
  }
  return base;
}

}  // namespace

PYBIND11_MODULE(pregwa, m) {
  m.doc() = "Predictive green wireless access: air-time planning for stored-video streaming";

  py::register_exception<ConfigError>(m, "ConfigError");
  py::register_exception<ParseError>(m, "ParseError");

  py::class_<LoadedExperiment>(m, "Experiment")
      .def_property_readonly("name",
                             [](const LoadedExperiment& e) { return e.scenario.name; })
      .def_property_readonly("n_users",
                             [](const LoadedExperiment& e) { return e.scenario.n_users(); })
      .def_property_readonly(
          "horizon_slots", [](const LoadedExperiment& e) { return e.scenario.horizon_slots; })
      .def("reseed", [](LoadedExperiment& e, std::uint64_t seed) { reseed_experiment(e, seed); })
      .def(
          "run",
          [](const LoadedExperiment& e, const std::string& strategy,
             std::optional<std::vector<int>> off_bs, std::optional<bool> soft,
             std::optional<double> lam, bool include_plan, bool include_buffers) {
            RunOptions opts = options_from_kwargs(e.options, strategy, off_bs, soft, lam);
            opts.keep_buffers = include_buffers;
            const RunResult rr = run(e.scenario, opts);
            return run_to_dict(e.scenario, rr, include_plan);
          },
          py::arg("strategy") = "", py::arg("off_bs") = std::nullopt,
          py::arg("soft") = std::nullopt, py::arg("soft_lambda") = std::nullopt,
          py::arg("include_plan") = false, py::arg("include_buffers") = false);

  m.def("load_experiment", &load_experiment, py::arg("path"),
        "Load a scenario config (JSON) with its run options");
  m.def("load_experiment_text", &load_experiment_text, py::arg("json_text"),
        py::arg("base_dir") = std::filesystem::path("."),
        "Parse a scenario config from a JSON string");

  m.def(
      "run_sweep",
      [](const std::filesystem::path& spec_path, const std::filesystem::path& out_dir,
         int workers) {
        const SweepSpec spec = load_sweep(spec_path);
        OutputOptions out;
        out.out_dir = out_dir;
        const SweepOutcome outcome = run_sweep(spec, out, workers);
        py::list rows;
        for (const auto& r : outcome.rows) {
          py::dict d;
          d["scenario_id"] = r.scenario_id;
          d["strategy"] = r.strategy;
          d["streaming_rate_bps"] = r.streaming_rate_bps;
          d["n_users"] = r.n_users;
          d["mean_airtime"] = r.mean_airtime;
          if (r.reduction_vs_es) d["reduction_vs_es"] = *r.reduction_vs_es;
          d["stall_slots"] = r.stall_slots;
          d["undelivered_bits"] = r.undelivered_bits;
          if (r.energy_proxy) d["energy_proxy"] = *r.energy_proxy;
          d["status"] = r.status;
          rows.append(d);
        }
        py::dict result;
        result["rows"] = rows;
        result["results_csv"] = outcome.results_csv;
        result["chart_svg"] = outcome.chart_svg;
        return result;
      },
      py::arg("spec_path"), py::arg("out_dir") = std::filesystem::path("."),
      py::arg("workers") = 1);

  m.def(
      "verify_plan_file",
      [](const std::filesystem::path& plan_csv, const std::filesystem::path& config) {
        const VerifyOutcome v = verify_plan_file(plan_csv, config);
        return py::make_tuple(v.ok, v.message, v.stall_slots);
      },
      py::arg("plan_csv"), py::arg("config"));

  m.def(
      "path_loss_db",
      [](double distance_m, const std::optional<py::dict>& radio) {
        RadioConfig cfg;
        if (radio) {
          if (radio->contains("pl_intercept_db"))
            cfg.pl_intercept_db = (*radio)["pl_intercept_db"].cast<double>();
          if (radio->contains("pl_slope_db_per_decade"))
            cfg.pl_slope_db_per_decade = (*radio)["pl_slope_db_per_decade"].cast<double>();
          if (radio->contains("min_distance_m"))
            cfg.min_distance_m = (*radio)["min_distance_m"].cast<double>();
        }
        return path_loss_db(distance_m, cfg);
      },
      py::arg("distance_m"), py::arg("radio") = std::nullopt);

  m.def(
      "feasible_rate_bits",
      [](double distance_m, double slot_s, const std::optional<py::dict>& radio) {
        RadioConfig cfg;
        if (radio) {
          const py::dict& r = *radio;
          if (r.contains("tx_power_dbm")) cfg.tx_power_dbm = r["tx_power_dbm"].cast<double>();
          if (r.contains("bandwidth_hz")) cfg.bandwidth_hz = r["bandwidth_hz"].cast<double>();
          if (r.contains("noise_psd_dbm_hz"))
            cfg.noise_psd_dbm_hz = r["noise_psd_dbm_hz"].cast<double>();
          if (r.contains("noise_figure_db"))
            cfg.noise_figure_db = r["noise_figure_db"].cast<double>();
          if (r.contains("snr_cap_db")) cfg.snr_cap_db = r["snr_cap_db"].cast<double>();
          if (r.contains("pl_intercept_db"))
            cfg.pl_intercept_db = r["pl_intercept_db"].cast<double>();
          if (r.contains("pl_slope_db_per_decade"))
            cfg.pl_slope_db_per_decade = r["pl_slope_db_per_decade"].cast<double>();
          if (r.contains("min_distance_m"))
            cfg.min_distance_m = r["min_distance_m"].cast<double>();
        }
        return feasible_rate_bits(distance_m, cfg, slot_s);
      },
      py::arg("distance_m"), py::arg("slot_s") = 1.0, py::arg("radio") = std::nullopt);

  m.def(
      "demand_at",
      [](double streaming_rate_bps, double total_bits, int start_slot, int slot, double slot_s) {
        VideoSession s;
        s.streaming_rate_bps = streaming_rate_bps;
        s.total_bits = total_bits;
        s.start_slot = start_slot;
        return demand_at(s, slot, slot_s);
      },
      py::arg("streaming_rate_bps"), py::arg("total_bits"), py::arg("start_slot"),
      py::arg("slot"), py::arg("slot_s") = 1.0);
}
