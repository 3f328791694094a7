#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "vlcrelay/led.hpp"
#include "vlcrelay/signal.hpp"

namespace vlcrelay {

/// Electrical power budget shared by source and relay, plus receiver constants.
struct LinkBudget {
  double p_total_w = 1e-3;          // P
  double k_p = 0.5;                 // source share of P
  double responsivity = 0.28;       // r, A/W
  double noise_psd = 1e-20;         // N_o, W/Hz
  double t_p = 50e-9;               // relay processing delay
  double noise_bandwidth_hz = 4e6;  // B = 1 / T_s

  static double dbm_to_watts(double dbm);
  static double watts_to_dbm(double watts);

  double source_power() const noexcept { return p_total_w * k_p; }
  double relay_power() const noexcept { return p_total_w * (1.0 - k_p); }
  // sigma_v^2 = N_o * B
  double noise_variance() const noexcept { return noise_psd * noise_bandwidth_hz; }

  LinkBudget with_power(double p_total_w, double k_p) const;
  void validate() const;
};

/// The four LED-filtered optical CIRs of one relay scenario.
struct RelayChannelSet {
  SampledSignal c_sd_eff;
  SampledSignal c_sr_eff;
  SampledSignal c_rd_eff;
  SampledSignal c_rr_eff;  // may be all zero (no loop interference)
  std::optional<SampledSignal> c_rd_raw;  // relay->destination before LED filtering
  std::string source_tag = "synthetic";   // "file" | "synthetic"

  double sample_interval() const noexcept { return c_sd_eff.sample_interval(); }
  void validate() const;
};

// Applies the LED response to four raw optical CIRs.
RelayChannelSet make_relay_channels(const SampledSignal& c_sd, const SampledSignal& c_sr, const SampledSignal& c_rd,
                                    const SampledSignal& c_rr, const LedModel& led, std::string source_tag,
                                    double truncation_tolerance = 1e-9);

/// P K_p r^2 E_sr + P (1 - K_p) r^2 E_rr + sigma_v^2, with E the CIR energy.
double relay_received_power(const RelayChannelSet& channels, const LinkBudget& budget);

// Which power the relay gain numerator scales with.
enum class GaNumerator { total, source };

/// sqrt(2 (1 - K_p) P_num / (2 K_p P r^2 E_hsr + sigma_v^2)) where P_num is P
/// (total) or P K_p (source) and E_hsr is the energy of the band-limited
/// source->relay response.
double amplification_factor(const LinkBudget& budget, const SampledSignal& h_sr,
                            GaNumerator numerator = GaNumerator::total);

// rho = r * ||C_rr-eff||_1; the loop series converges for rho < 1.
double loop_gain(const RelayChannelSet& channels, const LinkBudget& budget);

struct LoopSeries {
  SampledSignal response;
  std::size_t terms = 0;
};

/// Solves h = front + loop (*) h as the truncated series sum_k loop^(*k) (*) front.
/// Stops once a term's energy drops below residual_tolerance times the
/// accumulated energy.
LoopSeries solve_loop_series(const SampledSignal& front, const SampledSignal& loop, double residual_tolerance,
                             std::size_t max_terms = 100000);

struct FdRelayResponse {
  SampledSignal signal;
  SampledSignal noise;
  std::size_t terms = 0;
  double loop_gain = 0.0;
};

/// Full-duplex relay response with loop interference:
///   h = G_A r delta(t - T_p) (*) C_LED + r delta(t - T_p) (*) h (*) C_rr-eff.
/// The signal and noise responses obey the same equation; noise_front replaces
/// the noise path's front term when given. Throws DivergenceError for rho >= 1.
FdRelayResponse fd_relay_cir(const RelayChannelSet& channels, const LinkBudget& budget, double g_a,
                             const LedModel& led, double residual_tolerance = 1e-9,
                             const SampledSignal* noise_front = nullptr);

// g_T (*) c_eff (*) g_R
SampledSignal band_limited_channel(const SampledSignal& c_eff, const SampledSignal& g_t, const SampledSignal& g_r);

// Which relay->destination CIR trails the relayed path.
enum class RelayToDestination { effective, raw };

const SampledSignal& relay_to_destination(const RelayChannelSet& channels, RelayToDestination which);

struct EndToEndCir {
  SampledSignal signal;
  SampledSignal noise;
};

/// h_signal = C_sd-eff + C_sr-eff (*) h_fd_signal (*) c_rd and
/// h_noise = h_fd_noise (*) c_rd.
EndToEndCir end_to_end_cir(const SampledSignal& c_sd_eff, const SampledSignal& c_sr_eff,
                           const SampledSignal& h_fd_signal, const SampledSignal& h_fd_noise,
                           const SampledSignal& c_rd);

}  // namespace vlcrelay
