#pragma once

namespace pregwa {

// Link-budget constants. Defaults follow the common LTE macro values: 40 W
// transmit power over 5 MHz, PL(d) = 128.1 + 37.6 log10(d/km), thermal noise
// -174 dBm/Hz plus a receiver noise figure, SNR clipped at 20 dB for the
// highest practical modulation order.
struct RadioConfig {
  double tx_power_dbm = 46.02;
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 9.0;
  double snr_cap_db = 20.0;
  double pl_intercept_db = 128.1;
  double pl_slope_db_per_decade = 37.6;
  double min_distance_m = 1.0;  // clamp below; keeps PL finite as d -> 0

  void validate() const;  // throws ConfigError
};

}  // namespace pregwa
