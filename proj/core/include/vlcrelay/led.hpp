#pragma once

#include "vlcrelay/signal.hpp"

namespace vlcrelay {

/// First-order low-pass LED: C(f) = 1 / (1 + j f / f_cutoff).
struct LedModel {
  double cutoff_hz = 20e6;

  void validate() const;
};

Complex led_frequency_response(const LedModel& led, double frequency_hz);

// Continuous impulse response 2 pi fc exp(-2 pi fc t) for t >= 0, zero before.
double led_impulse_value(const LedModel& led, double t);

/// Causal discretization of the LED impulse response. Each sample is the bin
/// average of the continuous response over [n dt, (n+1) dt), so the DC gain is
/// preserved up to truncation. The tail is cut once the remaining energy falls
/// below truncation_tolerance of the total. Requires dt <= 1 / (10 fc).
SampledSignal led_impulse_response(const LedModel& led, double sample_interval,
                                   double truncation_tolerance = 1e-9);

// raw (optical CIR) convolved with the LED response on the raw signal's grid.
SampledSignal effective_cir(const SampledSignal& raw, const LedModel& led,
                            double truncation_tolerance = 1e-9);

}  // namespace vlcrelay
