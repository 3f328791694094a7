#include "vlcrelay/relay_link.hpp"

#include <map>
#include <mutex>
#include <utility>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {

std::string to_string(RelayMode mode) {
  switch (mode) {
    case RelayMode::direct:
      return "direct";
    case RelayMode::half_duplex:
      return "HD";
    case RelayMode::full_duplex:
      return "FD";
  }
  return "direct";
}

RelayMode relay_mode_from_name(const std::string& name) {
  if (name == "direct" || name == "Direct" || name == "DIRECT") return RelayMode::direct;
  if (name == "HD" || name == "hd") return RelayMode::half_duplex;
  if (name == "FD" || name == "fd") return RelayMode::full_duplex;
  throw ConfigError("unknown relay mode '" + name + "' (expected direct, HD or FD)");
}

struct RelayLink::Cache {
  std::mutex mutex;
  std::map<std::pair<double, double>, std::shared_ptr<const FdUnitResponse>> entries;
};

RelayLink::RelayLink(RelayChannelSet channels, OfdmConfig config, LedModel led, RelayOptions options)
    : channels_(std::move(channels)),
      config_(config),
      led_(led),
      options_(options),
      shaping_(make_pulse_shaping(config_)),
      h_sr_(band_limited_channel(channels_.c_sr_eff, shaping_.g_t, shaping_.g_r)),
      cache_(std::make_shared<Cache>()) {
  channels_.validate();
  led_.validate();
  if (!same_grid(channels_.sample_interval(), config_.sample_interval())) {
    throw ConfigError("channel sample interval does not match symbol_interval / samples_per_symbol");
  }
  if (!(options_.residual_tolerance > 0.0)) throw ConfigError("residual tolerance must be positive");
  h_sd_freq_ = symbol_rate_response(channels_.c_sd_eff, shaping_, config_);
  h_sr_freq_ = symbol_rate_response(channels_.c_sr_eff, shaping_, config_);
  h_rd_freq_ = symbol_rate_response(c_rd(), shaping_, config_);
}

const SampledSignal& RelayLink::c_rd() const { return relay_to_destination(channels_, options_.rd); }

double RelayLink::g_a(const LinkBudget& budget) const {
  return amplification_factor(budget, h_sr_, options_.ga_numerator);
}

std::shared_ptr<const FdUnitResponse> RelayLink::fd_unit(const LinkBudget& budget) const {
  const std::pair<double, double> key{budget.responsivity, budget.t_p};
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->entries.find(key);
    if (it != cache_->entries.end()) return it->second;
  }
  const FdRelayResponse fd = fd_relay_cir(channels_, budget, 1.0, led_, options_.residual_tolerance);
  const SampledSignal& rd = c_rd();
  auto unit = std::make_shared<FdUnitResponse>(FdUnitResponse{
      convolve(convolve(channels_.c_sr_eff, fd.signal), rd), convolve(fd.noise, rd), {}, {}, fd.terms,
      fd.loop_gain});
  unit->relayed_freq = symbol_rate_response(unit->relayed, shaping_, config_);
  unit->noise_freq = symbol_rate_response(unit->noise, shaping_, config_);

  std::lock_guard<std::mutex> lock(cache_->mutex);
  auto [it, inserted] = cache_->entries.emplace(key, std::move(unit));
  return it->second;
}

EndToEndCir RelayLink::full_duplex(const LinkBudget& budget) const {
  const double g = g_a(budget);
  const auto unit = fd_unit(budget);
  return {add(channels_.c_sd_eff, unit->relayed.scaled(g)), unit->noise.scaled(g)};
}

}  // namespace vlcrelay
