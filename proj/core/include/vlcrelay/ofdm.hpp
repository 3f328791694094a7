#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vlcrelay/relay.hpp"
#include "vlcrelay/signal.hpp"

namespace vlcrelay {

/// DCO-OFDM frame and waveform parameters.
///
/// symbol_interval is the spacing of the IDFT output samples (T_s). The
/// waveform is simulated on a grid of symbol_interval / samples_per_symbol.
/// The receiver's DFT window starts window_advance samples before the end of
/// the cyclic prefix so that pulse-shaping pre-cursors stay inside the frame.
struct OfdmConfig {
  int n_subcarriers = 256;
  int cp_length = 32;
  double symbol_interval = 250e-9;
  int samples_per_symbol = 50;
  double rrc_roll_off = 0.5;
  int rrc_span_symbols = 12;
  int window_advance = 12;  // the whole g_T (*) g_R pre-cursor

  int data_subcarriers() const noexcept { return n_subcarriers / 2 - 1; }
  double sample_interval() const noexcept { return symbol_interval / samples_per_symbol; }
  void validate() const;
};

// Transmit (g_T) and matched receive (g_R) filters on the simulation grid.
struct PulseShaping {
  SampledSignal g_t;
  SampledSignal g_r;
};

PulseShaping make_pulse_shaping(const OfdmConfig& config);

/// [0, S_1 .. S_{N/2-1}, 0, S*_{N/2-1} .. S*_1]
SpectrumVector hermitian_frame(std::span<const Complex> data_symbols, std::size_t n, double sample_interval = 1.0);
// Bins 1 .. N/2-1 of a frame spectrum.
std::vector<Complex> data_bins(const SpectrumVector& spectrum);

std::vector<Complex> add_cp(std::span<const Complex> x, int cp_length);
/// Takes N samples starting `advance` samples before the end of the prefix and
/// rotates them back so that remove_cp(add_cp(x)) == x for any advance <= N_cp.
std::vector<Complex> remove_cp(std::span<const Complex> y, std::size_t n, int cp_length, int advance = 0);

/// Impulse train sum x[n] delta(t - (start_symbol + n) T_s) filtered by g_t.
SampledSignal shape_waveform(std::span<const Complex> frame_samples, const SampledSignal& g_t,
                             int samples_per_symbol, std::int64_t start_symbol = 0);

/// Scale factors applied by transmit_through.
struct TransmitLevels {
  double amplitude = 1.0;       // sqrt(P K_p) r for the source
  double relay_scale = 1.0;     // r, applied to the relay noise path
  double noise_variance = 0.0;  // sigma_v^2 after matched filtering
};

TransmitLevels source_levels(const LinkBudget& budget);

/// amplitude * (waveform (*) h_signal) + relay_scale * (v_R (*) h_noise) + v_D,
/// then matched filtered with g_R. v_R is a white symbol-rate sequence of
/// variance sigma_v^2 shaped by g_T; v_D is white on the simulation grid with
/// per-sample variance sigma_v^2 / dt, so that both reach the symbol-rate
/// samples with variance sigma_v^2. The seed fixes both draws.
SampledSignal transmit_through(const PulseShaping& shaping, int samples_per_symbol, const SampledSignal& h_signal,
                               const SampledSignal& h_noise, const TransmitLevels& levels,
                               const SampledSignal& waveform, std::uint64_t seed);

/// Symbol-rate samples of g_T (*) h (*) g_R folded onto N bins and transformed
/// with an unnormalized DFT: the per-subcarrier gain seen after remove_cp.
SpectrumVector symbol_rate_response(const SampledSignal& h, const PulseShaping& shaping, const OfdmConfig& config);

/// Samples the frame starting at start_symbol at t = n T_s, removes the prefix
/// and returns the unitary DFT of the N window samples.
SpectrumVector frame_observation(const SampledSignal& y, const OfdmConfig& config, std::int64_t start_symbol = 0);

/// Zero-forcing equalization of the data bins: Y[k] / (amplitude * H[k]).
/// Throws DeadSubcarrierError when |H[k]| < 1e-15 on a data bin.
std::vector<Complex> receive_frame(const SampledSignal& y, const OfdmConfig& config, const SpectrumVector& h_freq,
                                   double amplitude, std::int64_t start_symbol = 0);

}  // namespace vlcrelay
