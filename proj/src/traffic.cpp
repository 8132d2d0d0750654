#include "pregwa/traffic.hpp"

#include <algorithm>
#include <cassert>

namespace pregwa {

double demand_at(const VideoSession& session, int slot, double slot_s) {
  const int played_slots = std::max(0, slot - session.start_slot + 1);
  return std::min(session.streaming_rate_bps * slot_s * played_slots, session.total_bits);
}

double accumulate(double prev_bits, double x, double rate_bits, double total_bits) {
  return std::min(prev_bits + x * rate_bits, total_bits);
}

DemandCurve DemandCurve::for_session(const VideoSession& session, int horizon_slots, double slot_s,
                                     std::optional<int> end_slot) {
  DemandCurve curve;
  curve.cum_bits.resize(static_cast<std::size_t>(horizon_slots));
  for (int t = 0; t < horizon_slots; ++t) {
    const int eval = end_slot ? std::min(t, *end_slot) : t;
    curve.cum_bits[static_cast<std::size_t>(t)] = demand_at(session, eval, slot_s);
  }
  return curve;
}

StallReport stall_report(std::span<const double> delivered_cum, std::span<const double> demand_cum,
                         double tolerance_bits) {
  assert(delivered_cum.size() == demand_cum.size());
  StallReport rep;
  for (std::size_t t = 0; t < demand_cum.size(); ++t) {
    const double deficit = demand_cum[t] - delivered_cum[t];
    if (deficit > tolerance_bits) {
      ++rep.stall_slots;
      if (!rep.first_stall_slot) rep.first_stall_slot = static_cast<int>(t);
      rep.max_deficit_bits = std::max(rep.max_deficit_bits, deficit);
    }
  }
  return rep;
}

}  // namespace pregwa
