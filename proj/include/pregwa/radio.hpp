#pragma once

#include <span>
#include <vector>

#include "pregwa/scenario.hpp"

namespace pregwa {

// PL(d) = intercept + slope * log10(d/km), with d clamped below at min_distance.
double path_loss_db(double distance_m, const RadioConfig& cfg);

// Shannon-capacity bits deliverable in one slot of length slot_s at distance d,
// with the SNR clipped at cfg.snr_cap_db.
double feasible_rate_bits(double distance_m, const RadioConfig& cfg, double slot_s);

// Clip ceiling: tau * B * log2(1 + 10^(snr_cap/10)).
double rate_ceiling_bits(const RadioConfig& cfg, double slot_s);

// Nearest BS by 2-D distance (along-road delta and perpendicular offset);
// ties broken by the lowest BS index.
int associate(double position_m, const RoadLayout& layout);

// Same, restricted to the given BS subset. Throws ConfigError if the subset is empty.
int associate(double position_m, const RoadLayout& layout, std::span<const int> active_bs);

// Per-user per-slot feasible rates (bits per slot) plus BS association.
// Entries outside a user's in-system window have rate 0 and bs() == kNoBs.
class RateMatrix {
 public:
  static constexpr int kNoBs = -1;

  RateMatrix(int n_users, int horizon)
      : n_users_(n_users),
        horizon_(horizon),
        rates_(static_cast<std::size_t>(n_users) * horizon, 0.0),
        assoc_(static_cast<std::size_t>(n_users) * horizon, kNoBs) {}

  int n_users() const { return n_users_; }
  int horizon() const { return horizon_; }

  double rate(int u, int t) const { return rates_[index(u, t)]; }
  int bs(int u, int t) const { return assoc_[index(u, t)]; }
  bool in_system(int u, int t) const { return assoc_[index(u, t)] != kNoBs; }

  void set(int u, int t, int bs, double rate_bits) {
    assoc_[index(u, t)] = bs;
    rates_[index(u, t)] = rate_bits;
  }

  // True exactly while the user's achievable rate is about to drop; the flag at a
  // user's last in-system slot is "decreasing". This one-bit trend is the only
  // look-ahead the distributed heuristic uses.
  bool rate_decreasing(int u, int t) const {
    if (!in_system(u, t)) return false;
    if (t + 1 >= horizon_ || !in_system(u, t + 1)) return true;
    return rate(u, t + 1) < rate(u, t);
  }

 private:
  std::size_t index(int u, int t) const {
    return static_cast<std::size_t>(u) * static_cast<std::size_t>(horizon_) +
           static_cast<std::size_t>(t);
  }

  int n_users_;
  int horizon_;
  std::vector<double> rates_;
  std::vector<int> assoc_;
};

RateMatrix build_rate_matrix(const ScenarioConfig& sc);

// Association restricted to active_bs; with every BS active this is bitwise
// identical to build_rate_matrix.
RateMatrix build_rate_matrix_forced(const ScenarioConfig& sc, std::span<const int> active_bs);

}  // namespace pregwa
