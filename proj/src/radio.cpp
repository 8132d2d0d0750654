#include "pregwa/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pregwa {

double path_loss_db(double distance_m, const RadioConfig& cfg) {
  const double d = std::max(distance_m, cfg.min_distance_m);
  return cfg.pl_intercept_db + cfg.pl_slope_db_per_decade * std::log10(d / 1000.0);
}

double feasible_rate_bits(double distance_m, const RadioConfig& cfg, double slot_s) {
  const double rx_dbm = cfg.tx_power_dbm - path_loss_db(distance_m, cfg);
  const double noise_dbm =
      cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
  const double snr_db = std::min(rx_dbm - noise_dbm, cfg.snr_cap_db);
  return slot_s * cfg.bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

double rate_ceiling_bits(const RadioConfig& cfg, double slot_s) {
  return slot_s * cfg.bandwidth_hz * std::log2(1.0 + std::pow(10.0, cfg.snr_cap_db / 10.0));
}

namespace {

double bs_distance(double position_m, const BsSite& bs) {
  return std::hypot(position_m - bs.along_m, bs.offset_m);
}

}  // namespace

int associate(double position_m, const RoadLayout& layout) {
  int best = 0;
  double best_d = bs_distance(position_m, layout.bs_sites[0]);
  for (int j = 1; j < layout.n_bs(); ++j) {
    const double d = bs_distance(position_m, layout.bs_sites[static_cast<std::size_t>(j)]);
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

int associate(double position_m, const RoadLayout& layout, std::span<const int> active_bs) {
  if (active_bs.empty()) throw ConfigError("active BS set must be non-empty");
  int best = -1;
  double best_d = 0.0;
  for (const int j : active_bs) {
    if (j < 0 || j >= layout.n_bs())
      throw ConfigError("active BS index " + std::to_string(j) + " out of range");
    const double d = bs_distance(position_m, layout.bs_sites[static_cast<std::size_t>(j)]);
    if (best < 0 || d < best_d || (d == best_d && j < best)) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

namespace {

RateMatrix build_matrix(const ScenarioConfig& sc, std::span<const int> active_bs) {
  RateMatrix m(sc.n_users(), sc.horizon_slots);
  for (int u = 0; u < sc.n_users(); ++u) {
    const auto& tr = sc.traces[static_cast<std::size_t>(u)];
    const int last = std::min(tr.exit_slot(), sc.horizon_slots - 1);
    for (int t = std::max(tr.entry_slot, 0); t <= last; ++t) {
      const double pos = *tr.position_at(t);
      const int j = associate(pos, sc.layout, active_bs);
      const double d =
          std::hypot(pos - sc.layout.bs_sites[static_cast<std::size_t>(j)].along_m,
                     sc.layout.bs_sites[static_cast<std::size_t>(j)].offset_m);
      m.set(u, t, j, feasible_rate_bits(d, sc.radio, sc.slot_s));
    }
  }
  return m;
}

}  // namespace

RateMatrix build_rate_matrix(const ScenarioConfig& sc) {
  std::vector<int> all(static_cast<std::size_t>(sc.layout.n_bs()));
  std::iota(all.begin(), all.end(), 0);
  return build_matrix(sc, all);
}

RateMatrix build_rate_matrix_forced(const ScenarioConfig& sc, std::span<const int> active_bs) {
  if (active_bs.empty()) throw ConfigError("active BS set must be non-empty");
  return build_matrix(sc, active_bs);
}

}  // namespace pregwa
