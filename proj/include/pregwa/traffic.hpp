#pragma once

#include <optional>
#include <span>
#include <vector>

#include "pregwa/scenario.hpp"

namespace pregwa {

// Cumulative bits the player has consumed by the END of slot t: V*tau per slot
// from start_slot, saturating at the video size.
double demand_at(const VideoSession& session, int slot, double slot_s);

// One delivery step: min(prev + x*r, D_i). Delivery never exceeds the video size.
double accumulate(double prev_bits, double x, double rate_bits, double total_bits);

// Per-slot cumulative demand over a horizon. When end_slot is given, demand stops
// accruing there (a user that leaves the road keeps its undelivered remainder,
// which is reported, not stalled).
struct DemandCurve {
  std::vector<double> cum_bits;

  static DemandCurve for_session(const VideoSession& session, int horizon_slots, double slot_s,
                                 std::optional<int> end_slot = std::nullopt);
  double at(int t) const { return cum_bits[static_cast<std::size_t>(t)]; }
  int horizon() const { return static_cast<int>(cum_bits.size()); }
};

// Cumulative delivered bits; buffer level is delivered minus demand.
struct DeliveryState {
  std::vector<double> cum_bits;

  explicit DeliveryState(int horizon_slots) : cum_bits(static_cast<std::size_t>(horizon_slots), 0.0) {}
  double at(int t) const { return cum_bits[static_cast<std::size_t>(t)]; }
  double buffer_at(int t, const DemandCurve& demand) const { return at(t) - demand.at(t); }
};

struct StallReport {
  int stall_slots = 0;
  std::optional<int> first_stall_slot;
  double max_deficit_bits = 0.0;
};

// Slot-by-slot comparison of delivery against demand; a stall is any slot where
// cumulative delivery falls short of cumulative demand.
StallReport stall_report(std::span<const double> delivered_cum, std::span<const double> demand_cum,
                         double tolerance_bits = 0.0);

}  // namespace pregwa
