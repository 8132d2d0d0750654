#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pregwa/experiment.hpp"

// Exit codes: 0 ok, 1 usage, 2 config/schema, 3 infeasible, 4 internal.
namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitInternal = 4;

std::string default_out_dir() {
  const char* env = std::getenv("PREGWA_OUT");
  return env && *env ? env : ".";
}

void apply_overrides(pregwa::LoadedExperiment& exp, const std::string& strategy,
                     const std::vector<int>& off_bs, double soft_lambda, bool soft,
                     long long seed, bool seed_set) {
  if (!strategy.empty()) exp.options.strategy = pregwa::strategy_from_string(strategy);
  if (!off_bs.empty()) exp.options.off_bs = off_bs;
  if (soft) exp.options.soft = true;
  if (soft_lambda > 0.0) {
    exp.options.soft_lambda = soft_lambda;
    exp.options.soft = true;
  }
  if (seed_set) pregwa::reseed_experiment(exp, static_cast<std::uint64_t>(seed));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Predictive green wireless access: air-time planning experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir = default_out_dir(), strategy;
  std::vector<int> off_bs;
  double soft_lambda = 0.0;
  bool soft = false;
  long long seed = 0;
  bool dump_plan = false, dump_buffers = false, dump_rates = false, dump_lp = false;
  int workers = 1;
  std::string plan_path, sweep_path;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario with one strategy");
  run_cmd->add_option("--config", config_path, "Scenario config (JSON)")->required();
  run_cmd
      ->add_option("--strategy", strategy,
                   "equal_share|rate_proportional|heuristic|optimal|optimal_bs_off")
      ->check(CLI::IsMember(
          {"equal_share", "rate_proportional", "heuristic", "optimal", "optimal_bs_off"}));
  run_cmd->add_option("--out-dir", out_dir, "Output directory (default $PREGWA_OUT or .)");
  run_cmd->add_option("--seed", seed, "Override the scenario seed")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--soft-lambda", soft_lambda, "Soft mode: stall-slack penalty");
  run_cmd->add_flag("--soft", soft, "Soft mode with the default penalty");
  run_cmd->add_option("--bs-off", off_bs, "BS indices to switch off");
  run_cmd->add_flag("--dump-plan", dump_plan, "Write plan_<strategy>.csv");
  run_cmd->add_flag("--dump-buffers", dump_buffers, "Write buffers_<strategy>.csv");
  run_cmd->add_flag("--dump-rates", dump_rates, "Write rates.csv");
  run_cmd->add_flag("--dump-lp", dump_lp,
                    "Write the air-time LP in text interchange format (optimal strategies)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a sweep spec (rate or user count)");
  sweep_cmd->add_option("--spec", sweep_path, "Sweep spec (JSON)")->required();
  sweep_cmd->add_option("--out-dir", out_dir, "Output directory (default $PREGWA_OUT or .)");
  sweep_cmd->add_option("--seed", seed, "Override the base scenario seed")
      ->check(CLI::NonNegativeNumber);
  sweep_cmd->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);

  auto* verify_cmd = app.add_subcommand("verify", "Re-verify a dumped plan");
  verify_cmd->add_option("--plan", plan_path, "Plan CSV from a run dump")->required();
  verify_cmd->add_option("--config", config_path, "Scenario config the plan belongs to")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints a usage diagnostic
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  const bool seed_set = run_cmd->count("--seed") > 0 || sweep_cmd->count("--seed") > 0;

  try {
    if (app.got_subcommand(run_cmd)) {
      pregwa::LoadedExperiment exp = pregwa::load_experiment(config_path);
      apply_overrides(exp, strategy, off_bs, soft_lambda, soft, seed, seed_set);
      pregwa::OutputOptions out;
      out.out_dir = out_dir;
      out.dump_plan = dump_plan;
      out.dump_buffers = dump_buffers;
      out.dump_rates = dump_rates;
      out.dump_lp = dump_lp;
      const pregwa::RunArtifacts artifacts = pregwa::run_experiment(exp, out);
      const pregwa::ResultRow& row = artifacts.row;
      std::printf("%s: strategy=%s mean_airtime=%.6f stalls=%d status=%s\n",
                  row.scenario_id.c_str(), row.strategy.c_str(), row.mean_airtime,
                  row.stall_slots, row.status.c_str());
      for (std::size_t j = 0; j < artifacts.per_bs_mean_airtime.size(); ++j)
        std::printf("  bs %zu mean air-time: %.6f\n", j, artifacts.per_bs_mean_airtime[j]);
      if (row.status == "infeasible") {
        std::fprintf(stderr, "hard-mode LP infeasible: demand cannot be met\n");
        return kExitInfeasible;
      }
      if (row.status != "ok") return kExitInternal;
      return kExitOk;
    }

    if (app.got_subcommand(sweep_cmd)) {
      pregwa::SweepSpec spec = pregwa::load_sweep(sweep_path);
      if (seed_set) pregwa::reseed_experiment(spec.base, static_cast<std::uint64_t>(seed));
      pregwa::OutputOptions out;
      out.out_dir = out_dir;
      const pregwa::SweepOutcome outcome = pregwa::run_sweep(spec, out, workers);
      std::printf("wrote %s and %s (%zu rows, %d failed)\n",
                  outcome.results_csv.string().c_str(), outcome.chart_svg.string().c_str(),
                  outcome.rows.size(), outcome.failed_rows);
      return kExitOk;  // partial failures are recorded per row
    }

    if (app.got_subcommand(verify_cmd)) {
      const pregwa::VerifyOutcome v = pregwa::verify_plan_file(plan_path, config_path);
      if (v.ok) {
        std::printf("plan ok (%d stall slots)\n", v.stall_slots);
        return kExitOk;
      }
      std::fprintf(stderr, "verification failed: %s\n", v.message.c_str());
      return v.message.rfind("dimension", 0) == 0 ? kExitConfig : kExitInternal;
    }
  } catch (const pregwa::ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return kExitConfig;
  } catch (const pregwa::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitUsage;
}
