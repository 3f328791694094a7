#pragma once

#include <memory>
#include <string>

#include "vlcrelay/led.hpp"
#include "vlcrelay/ofdm.hpp"
#include "vlcrelay/relay.hpp"

namespace vlcrelay {

enum class RelayMode { direct, half_duplex, full_duplex };

// "direct", "HD", "FD"
std::string to_string(RelayMode mode);
RelayMode relay_mode_from_name(const std::string& name);

struct RelayOptions {
  GaNumerator ga_numerator = GaNumerator::total;
  RelayToDestination rd = RelayToDestination::effective;
  double residual_tolerance = 1e-9;
};

/// Full-duplex responses at G_A = 1. Both the relayed signal path and the
/// relay noise path are linear in G_A, so any gain is a plain rescale.
struct FdUnitResponse {
  SampledSignal relayed;  // C_sr-eff (*) h_FD (*) C_rd
  SampledSignal noise;    // h_FD (*) C_rd
  SpectrumVector relayed_freq;
  SpectrumVector noise_freq;
  std::size_t terms = 0;
  double loop_gain = 0.0;
};

/// One relay scenario bound to an OFDM configuration: pulse shaping, the
/// symbol-rate gains of every hop, and the relay gain rule.
///
/// Copies share a cache of full-duplex unit responses keyed by the
/// responsivity and processing delay; the cache is safe to use from several
/// threads.
class RelayLink {
 public:
  RelayLink(RelayChannelSet channels, OfdmConfig config, LedModel led = {}, RelayOptions options = {});

  const RelayChannelSet& channels() const noexcept { return channels_; }
  const OfdmConfig& config() const noexcept { return config_; }
  const PulseShaping& shaping() const noexcept { return shaping_; }
  const LedModel& led() const noexcept { return led_; }
  const RelayOptions& options() const noexcept { return options_; }

  // Relay->destination CIR selected by options().rd.
  const SampledSignal& c_rd() const;
  // Band-limited source->relay response g_T (*) C_sr-eff (*) g_R.
  const SampledSignal& h_sr() const noexcept { return h_sr_; }

  double g_a(const LinkBudget& budget) const;

  const SpectrumVector& h_sd_freq() const noexcept { return h_sd_freq_; }
  const SpectrumVector& h_sr_freq() const noexcept { return h_sr_freq_; }
  const SpectrumVector& h_rd_freq() const noexcept { return h_rd_freq_; }

  std::shared_ptr<const FdUnitResponse> fd_unit(const LinkBudget& budget) const;

  /// h_signal and h_noise of the full-duplex link at the budget's G_A.
  EndToEndCir full_duplex(const LinkBudget& budget) const;

 private:
  struct Cache;

  RelayChannelSet channels_;
  OfdmConfig config_;
  LedModel led_;
  RelayOptions options_;
  PulseShaping shaping_;
  SampledSignal h_sr_;
  SpectrumVector h_sd_freq_;
  SpectrumVector h_sr_freq_;
  SpectrumVector h_rd_freq_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace vlcrelay
