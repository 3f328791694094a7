#include "vlcrelay/led.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {

void LedModel::validate() const {
  if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz)) {
    throw ConfigError("LED cut-off frequency must be positive, got " + std::to_string(cutoff_hz));
  }
}

Complex led_frequency_response(const LedModel& led, double frequency_hz) {
  led.validate();
  return 1.0 / Complex(1.0, frequency_hz / led.cutoff_hz);
}

double led_impulse_value(const LedModel& led, double t) {
  led.validate();
  if (t < 0.0) return 0.0;
  const double a = 2.0 * std::numbers::pi * led.cutoff_hz;
  return a * std::exp(-a * t);
}

SampledSignal led_impulse_response(const LedModel& led, double sample_interval, double truncation_tolerance) {
  led.validate();
  if (!(sample_interval > 0.0)) throw ConfigError("sample interval must be positive");
  const double max_dt = 1.0 / (10.0 * led.cutoff_hz);
  if (sample_interval > max_dt * (1.0 + 1e-9)) {
    throw ConfigError("sample interval " + std::to_string(sample_interval) +
                      " s is too coarse for the LED pole; need <= " + std::to_string(max_dt) + " s");
  }
  if (!(truncation_tolerance > 0.0 && truncation_tolerance < 1.0)) {
    throw ConfigError("truncation tolerance must lie in (0, 1)");
  }
  const double a = 2.0 * std::numbers::pi * led.cutoff_hz;
  const double q = std::exp(-a * sample_interval);
  // The tail energy fraction after n bin-averaged samples is q^(2n).
  const auto length = static_cast<std::size_t>(std::ceil(std::log(truncation_tolerance) / (2.0 * std::log(q))));
  std::vector<Complex> samples(std::max<std::size_t>(length, 1));
  const double first = -std::expm1(-a * sample_interval) / sample_interval;
  double decay = 1.0;
  for (auto& s : samples) {
    s = first * decay;
    decay *= q;
  }
  return SampledSignal(std::move(samples), sample_interval, 0);
}

SampledSignal effective_cir(const SampledSignal& raw, const LedModel& led, double truncation_tolerance) {
  return convolve(raw, led_impulse_response(led, raw.sample_interval(), truncation_tolerance));
}

}  // namespace vlcrelay
