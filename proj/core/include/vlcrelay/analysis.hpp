#pragma once

#include <cstddef>
#include <vector>

#include "vlcrelay/modulation.hpp"
#include "vlcrelay/relay.hpp"
#include "vlcrelay/relay_link.hpp"

namespace vlcrelay {

/// How the relay-noise term of the full-duplex SNR is scaled.
///   consistent: sigma^2 (1 + |r H_noise[k]|^2), H_noise already carrying G_A
///   verbatim:   sigma^2 (1 + |r G_A H_noise[k]|^2) as printed
enum class FdNoiseGain { consistent, verbatim };

// All three return +inf when sigma_v^2 = 0 and the signal term is nonzero.
double snr_fd(Complex h_signal, Complex h_noise, const LinkBudget& budget, double g_a,
              FdNoiseGain noise_gain = FdNoiseGain::consistent);
/// Direct term plus relayed term, both per slot:
///   P K_p r^2 |H_SD|^2 / sigma^2 + P K_p r^4 G_A^2 |H_SR H_RD|^2 / (sigma^2 (1 + |r G_A H_RD|^2))
double snr_hd(Complex h_sd, Complex h_sr, Complex h_rd, const LinkBudget& budget, double g_a);
// Whole budget P at the source: P r^2 |H_SD|^2 / sigma^2.
double snr_direct(Complex h_sd, const LinkBudget& budget);

/// BPSK and 2-PSK: erfc(sqrt(snr)) / 2
/// M-QAM: (sqrt(M) - 1) / (sqrt(M) log2 sqrt(M)) erfc(sqrt(3 snr / (2 (M - 1))))
/// BPSK-SIM: erfc(snr) / 2, or erfc(sqrt(snr)) / 2 when bpsk_sim_sqrt is set.
/// Throws ConfigError for negative or NaN snr.
double ber_per_subcarrier(double snr, const ModulationScheme& scheme, bool bpsk_sim_sqrt = false);

struct SnrProfile {
  RelayMode mode = RelayMode::direct;
  std::vector<double> per_bin;  // data subcarriers k = 1 .. N/2 - 1, linear
  void validate() const;
};

// 2 / (N - 2), which equals 1 / (N/2 - 1).
double ber_average_factor(int n_subcarriers);

/// Mean per-subcarrier BER over the N/2 - 1 data subcarriers.
double average_ber(const SnrProfile& profile, const ModulationScheme& scheme, int n_subcarriers,
                   bool bpsk_sim_sqrt = false);

struct AnalysisOptions {
  FdNoiseGain fd_noise_gain = FdNoiseGain::consistent;
  bool bpsk_sim_sqrt = false;
};

/// Closed-form link evaluation for one relay scenario.
class LinkModel {
 public:
  explicit LinkModel(RelayLink link, AnalysisOptions options = {});

  const RelayLink& link() const noexcept { return link_; }
  const AnalysisOptions& options() const noexcept { return options_; }

  SnrProfile snr_profile(RelayMode mode, const LinkBudget& budget) const;
  double average_ber(RelayMode mode, const ModulationScheme& scheme, const LinkBudget& budget) const;

 private:
  RelayLink link_;
  AnalysisOptions options_;
};

/// K_p candidates lo, lo + step, ... <= hi, with 0.5 always included so that
/// the optimum never loses to equal power allocation.
struct KpGrid {
  double lo = 0.01;
  double hi = 0.99;
  double step = 1e-4;

  // Multiples of 0.0099 from 0.0099 to 0.99.
  static KpGrid table2();
  std::vector<double> points() const;
  void validate() const;
};

struct KpOptimum {
  double k_p = 0.5;
  double ber = 0.5;
  std::size_t evaluated = 0;
};

/// Exhaustive search of average BER over the grid at fixed total power; ties
/// go to the smaller K_p. Grid points whose full-duplex loop diverges are
/// skipped; if every point diverges the DivergenceError propagates.
KpOptimum optimize_kp(const LinkModel& model, RelayMode mode, const ModulationScheme& scheme,
                      const LinkBudget& budget, const KpGrid& grid = {});

}  // namespace vlcrelay
