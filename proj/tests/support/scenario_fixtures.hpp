#pragma once

// Shared scenario builders for tests: a paper-shaped two-cell road plus small
// hand-built fixtures with explicit traces and rate matrices.

#include <optional>
#include <vector>

#include "pregwa/radio.hpp"
#include "pregwa/scenario.hpp"

namespace pregwa {
namespace testsupport {

inline RoadLayout two_cell_road() {
  RoadLayout l;
  l.length_m = 2000.0;
  l.bs_sites = {{500.0, 0.0}, {1500.0, 0.0}};
  return l;
}

struct ScenarioParams {
  int n_users = 8;
  int horizon = 120;
  double streaming_rate_bps = 0.4e6;
  double video_slots = 120;  // D_i = V * tau * video_slots
  double speed_min = 10.0;
  double speed_max = 20.0;
  int arrival_spread = 40;
  double noise_figure_db = 36.0;  // cell-edge SNR near 0 dB: rates vary on the road
  std::uint64_t seed = 1;
};

inline ScenarioConfig make_scenario(const ScenarioParams& p) {
  ScenarioConfig sc;
  sc.name = "test";
  sc.layout = two_cell_road();
  sc.horizon_slots = p.horizon;
  sc.slot_s = 1.0;
  sc.seed = p.seed;
  sc.radio.noise_figure_db = p.noise_figure_db;
  TraceGenParams g;
  g.n_users = p.n_users;
  g.speed_min_mps = p.speed_min;
  g.speed_max_mps = p.speed_max;
  g.arrival_spread_slots = p.arrival_spread;
  sc.traces = generate_traces(sc.layout, g, p.horizon, sc.slot_s, p.seed);
  for (const auto& tr : sc.traces) {
    VideoSession s;
    s.user_id = tr.user_id;
    s.streaming_rate_bps = p.streaming_rate_bps;
    s.total_bits = p.streaming_rate_bps * sc.slot_s * p.video_slots;
    s.start_slot = tr.entry_slot;
    sc.sessions.push_back(s);
  }
  return sc;
}

// A bare scenario whose rate matrix the test writes by hand. Traces park every
// user at the first BS for `horizon` slots so windows span the full horizon.
inline ScenarioConfig handmade_scenario(int n_users, int horizon, double v_bps,
                                        double video_slots,
                                        std::optional<std::vector<int>> entries = std::nullopt) {
  ScenarioConfig sc;
  sc.name = "handmade";
  sc.layout = two_cell_road();
  sc.horizon_slots = horizon;
  sc.slot_s = 1.0;
  for (int u = 0; u < n_users; ++u) {
    MobilityTrace tr;
    tr.user_id = u;
    tr.entry_slot = entries ? (*entries)[static_cast<std::size_t>(u)] : 0;
    tr.speed_mps = 0.0;
    tr.positions_m.assign(static_cast<std::size_t>(horizon - tr.entry_slot), 500.0);
    sc.traces.push_back(tr);
    VideoSession s;
    s.user_id = u;
    s.streaming_rate_bps = v_bps;
    s.total_bits = v_bps * sc.slot_s * video_slots;
    s.start_slot = tr.entry_slot;
    sc.sessions.push_back(s);
  }
  return sc;
}

}  // namespace testsupport
}  // namespace pregwa
