#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "pregwa/sim.hpp"

namespace pregwa {

struct UniformSessions {
  double streaming_rate_bps = 1e6;
  double duration_slots = 45;
  int start_delay_slots = 0;  // playback start relative to road entry
};

// How the scenario was produced; sweeps re-instantiate from this.
struct ScenarioRecipe {
  std::optional<TraceGenParams> generator;  // present when traces were generated
  std::optional<UniformSessions> uniform;   // present when sessions were uniform
};

// A scenario plus the run options the config carries (strategy, BS-off set,
// soft-mode settings, power model). CLI flags override these.
struct LoadedExperiment {
  ScenarioConfig scenario;
  RunOptions options;
  ScenarioRecipe recipe;
};

// JSON scenario document; schema documented in docs/file-formats.md. Traces
// come from an inline generator spec, a trace CSV path (relative to the config
// file), or an explicit list.
LoadedExperiment load_experiment(const std::filesystem::path& path);
LoadedExperiment load_experiment_text(const std::string& json_text,
                                      const std::filesystem::path& base_dir = ".");

// Re-seed and regenerate whatever the recipe covers (generated traces and the
// uniform sessions tied to them).
void reseed_experiment(LoadedExperiment& exp, std::uint64_t seed);

struct SweepSpec {
  enum class Parameter { streaming_rate, n_users };

  LoadedExperiment base;
  Parameter parameter = Parameter::streaming_rate;
  std::vector<double> values;
  std::vector<Strategy> strategies;
  std::string name = "sweep";
};

SweepSpec load_sweep(const std::filesystem::path& path);
SweepSpec load_sweep_text(const std::string& json_text,
                          const std::filesystem::path& base_dir = ".");

// Re-instantiate the base scenario at one swept value. streaming_rate requires
// uniform sessions; n_users additionally requires generated traces.
ScenarioConfig apply_sweep_value(const SweepSpec& spec, double value);

}  // namespace pregwa
