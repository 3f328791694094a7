#include "vlcrelay/relay.hpp"

#include <cmath>
#include <sstream>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {

double LinkBudget::dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double LinkBudget::watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

LinkBudget LinkBudget::with_power(double p, double k) const {
  LinkBudget out = *this;
  out.p_total_w = p;
  out.k_p = k;
  return out;
}

void LinkBudget::validate() const {
  if (!(p_total_w > 0.0) || !std::isfinite(p_total_w)) throw ConfigError("total power must be positive");
  if (!(k_p > 0.0 && k_p < 1.0)) throw ConfigError("power split K_p must lie in (0, 1)");
  if (!(responsivity > 0.0)) throw ConfigError("responsivity must be positive");
  if (!(noise_psd >= 0.0)) throw ConfigError("noise spectral density must be non-negative");
  if (!(t_p >= 0.0)) throw ConfigError("processing delay must be non-negative");
  if (!(noise_bandwidth_hz > 0.0)) throw ConfigError("noise bandwidth must be positive");
}

void RelayChannelSet::validate() const {
  const double dt = c_sd_eff.sample_interval();
  for (const SampledSignal* s : {&c_sr_eff, &c_rd_eff, &c_rr_eff}) {
    if (!same_grid(s->sample_interval(), dt)) throw ConfigError("relay channel CIRs use different sample grids");
  }
  if (c_rd_raw && !same_grid(c_rd_raw->sample_interval(), dt)) {
    throw ConfigError("raw relay->destination CIR uses a different sample grid");
  }
  const std::pair<const SampledSignal*, const char*> required[] = {
      {&c_sd_eff, "source->destination"}, {&c_sr_eff, "source->relay"}, {&c_rd_eff, "relay->destination"}};
  for (const auto& [s, name] : required) {
    const double e = s->energy();
    if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError(std::string(name) + " CIR has no energy");
  }
}

RelayChannelSet make_relay_channels(const SampledSignal& c_sd, const SampledSignal& c_sr, const SampledSignal& c_rd,
                                    const SampledSignal& c_rr, const LedModel& led, std::string source_tag,
                                    double truncation_tolerance) {
  RelayChannelSet set{effective_cir(c_sd, led, truncation_tolerance),
                      effective_cir(c_sr, led, truncation_tolerance),
                      effective_cir(c_rd, led, truncation_tolerance),
                      effective_cir(c_rr, led, truncation_tolerance),
                      c_rd,
                      std::move(source_tag)};
  set.validate();
  return set;
}

double relay_received_power(const RelayChannelSet& channels, const LinkBudget& budget) {
  const double r2 = budget.responsivity * budget.responsivity;
  return budget.source_power() * r2 * channels.c_sr_eff.energy() +
         budget.relay_power() * r2 * channels.c_rr_eff.energy() + budget.noise_variance();
}

double amplification_factor(const LinkBudget& budget, const SampledSignal& h_sr, GaNumerator numerator) {
  const double p = budget.p_total_w;
  const double k = budget.k_p;
  const double r2 = budget.responsivity * budget.responsivity;
  const double p_num = numerator == GaNumerator::total ? p : p * k;
  const double denominator = 2.0 * k * p * r2 * h_sr.energy() + budget.noise_variance();
  if (!(denominator > 0.0)) throw ConfigError("relay gain denominator is zero (no signal and no noise at the relay)");
  return std::sqrt(2.0 * (1.0 - k) * p_num / denominator);
}

double loop_gain(const RelayChannelSet& channels, const LinkBudget& budget) {
  return budget.responsivity * channels.c_rr_eff.l1_norm();
}

LoopSeries solve_loop_series(const SampledSignal& front, const SampledSignal& loop, double residual_tolerance,
                             std::size_t max_terms) {
  if (!(residual_tolerance > 0.0)) throw ConfigError("residual tolerance must be positive");
  SampledSignal sum = front;
  SampledSignal term = front;
  std::size_t terms = 1;
  if (front.is_zero() || loop.is_zero()) return {std::move(sum), terms};
  // Stop on the L2 ratio so the defining-equation residual stays below
  // rho * residual_tolerance.
  const double tol2 = residual_tolerance * residual_tolerance;
  while (true) {
    term = convolve(loop, term);
    sum = add(sum, term);
    ++terms;
    if (term.energy() < tol2 * sum.energy()) break;
    if (terms >= max_terms) {
      throw DivergenceError("loop series did not converge within " + std::to_string(max_terms) + " terms", 1.0);
    }
  }
  return {std::move(sum), terms};
}

FdRelayResponse fd_relay_cir(const RelayChannelSet& channels, const LinkBudget& budget, double g_a,
                             const LedModel& led, double residual_tolerance, const SampledSignal* noise_front) {
  budget.validate();
  const double dt = channels.sample_interval();
  const double rho = loop_gain(channels, budget);
  if (!(rho < 1.0)) {
    std::ostringstream msg;
    msg << "full-duplex loop diverges: loop gain rho = " << rho << " >= 1";
    throw DivergenceError(msg.str(), rho);
  }
  const SampledSignal led_h = led_impulse_response(led, dt);
  const SampledSignal front = convolve(delayed_impulse(budget.t_p, g_a * budget.responsivity, dt), led_h);
  const SampledSignal loop = convolve(delayed_impulse(budget.t_p, budget.responsivity, dt), channels.c_rr_eff);

  LoopSeries signal = solve_loop_series(front, loop, residual_tolerance);
  FdRelayResponse out{signal.response, signal.response, signal.terms, rho};
  if (noise_front != nullptr) out.noise = solve_loop_series(*noise_front, loop, residual_tolerance).response;
  return out;
}

SampledSignal band_limited_channel(const SampledSignal& c_eff, const SampledSignal& g_t, const SampledSignal& g_r) {
  return convolve(convolve(g_t, c_eff), g_r);
}

const SampledSignal& relay_to_destination(const RelayChannelSet& channels, RelayToDestination which) {
  if (which == RelayToDestination::raw) {
    if (!channels.c_rd_raw) throw ConfigError("raw relay->destination CIR is not available for this channel set");
    return *channels.c_rd_raw;
  }
  return channels.c_rd_eff;
}

EndToEndCir end_to_end_cir(const SampledSignal& c_sd_eff, const SampledSignal& c_sr_eff,
                           const SampledSignal& h_fd_signal, const SampledSignal& h_fd_noise,
                           const SampledSignal& c_rd) {
  const SampledSignal relayed = convolve(convolve(c_sr_eff, h_fd_signal), c_rd);
  return {add(c_sd_eff, relayed), convolve(h_fd_noise, c_rd)};
}

}  // namespace vlcrelay
