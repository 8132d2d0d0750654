#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pregwa/errors.hpp"
#include "pregwa/radio_config.hpp"

namespace pregwa {

// Hard physical limit used when validating traces; the slot model assumes the
// channel is coherent for vehicle speeds up to this value.
inline constexpr double kMaxVehicleSpeedMps = 20.0;

struct BsSite {
  double along_m = 0.0;   // position along the road axis
  double offset_m = 0.0;  // perpendicular distance from the road axis
};

struct RoadLayout {
  double length_m = 0.0;
  std::vector<BsSite> bs_sites;
  bool one_way = true;

  int n_bs() const { return static_cast<int>(bs_sites.size()); }
  void validate() const;  // throws ConfigError
};

// One vehicle: a per-slot sequence of along-road positions starting at entry_slot.
struct MobilityTrace {
  int user_id = 0;
  int entry_slot = 0;
  double speed_mps = 0.0;  // metadata; imported traces need not move at constant speed
  std::vector<double> positions_m;

  // Last slot for which a position is recorded.
  int exit_slot() const { return entry_slot + static_cast<int>(positions_m.size()) - 1; }

  std::optional<double> position_at(int slot) const {
    if (slot < entry_slot || slot > exit_slot()) return std::nullopt;
    return positions_m[static_cast<std::size_t>(slot - entry_slot)];
  }
};

struct VideoSession {
  int user_id = 0;
  double streaming_rate_bps = 0.0;  // V
  double total_bits = 0.0;          // D_i, a whole number of slots worth of V*tau
  int start_slot = 0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  RoadLayout layout;
  std::vector<MobilityTrace> traces;
  std::vector<VideoSession> sessions;
  int horizon_slots = 0;  // T
  double slot_s = 1.0;    // tau
  RadioConfig radio;
  std::uint64_t seed = 0;

  int n_users() const { return static_cast<int>(traces.size()); }
  // Session for the trace at index u (traces and sessions are index-aligned after validate()).
  const VideoSession& session_of(int u) const { return sessions[static_cast<std::size_t>(u)]; }
  void validate() const;  // throws ConfigError
};

struct TraceGenParams {
  int n_users = 1;
  double speed_min_mps = 10.0;
  double speed_max_mps = 20.0;
  int arrival_spread_slots = 0;
};

// Synthetic one-way constant-speed traces; deterministic for a fixed seed.
std::vector<MobilityTrace> generate_traces(const RoadLayout& layout, const TraceGenParams& params,
                                           int horizon_slots, double slot_s, std::uint64_t seed);

// Invariant pass usable on generated and imported traces alike. Throws ConfigError
// naming the offending user_id.
void validate_traces(std::span<const MobilityTrace> traces, const RoadLayout& layout,
                     double slot_s, double max_speed_mps = kMaxVehicleSpeedMps);

// Trace CSV: header `user_id,entry_slot,speed_mps,positions`, positions ';'-separated.
void save_traces(std::ostream& out, std::span<const MobilityTrace> traces);
void save_traces(const std::filesystem::path& path, std::span<const MobilityTrace> traces);
std::vector<MobilityTrace> load_traces(std::istream& in);
std::vector<MobilityTrace> load_traces(const std::filesystem::path& path);

}  // namespace pregwa
