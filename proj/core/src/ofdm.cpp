#include "vlcrelay/ofdm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fft.hpp"
#include "rng.hpp"
#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t positive_mod(std::int64_t a, std::int64_t n) {
  const std::int64_t m = a % n;
  return m < 0 ? m + n : m;
}

}  // namespace

void OfdmConfig::validate() const {
  if (n_subcarriers < 8 || n_subcarriers % 2 != 0) {
    throw ConfigError("number of subcarriers must be even and >= 8, got " + std::to_string(n_subcarriers));
  }
  if (cp_length < 0 || cp_length >= n_subcarriers) {
    throw ConfigError("cyclic prefix length must lie in [0, N), got " + std::to_string(cp_length));
  }
  if (!(symbol_interval > 0.0)) throw ConfigError("symbol interval must be positive");
  if (samples_per_symbol < 4) throw ConfigError("samples per symbol must be >= 4");
  if (!(rrc_roll_off >= 0.0 && rrc_roll_off <= 1.0)) throw ConfigError("roll-off must lie in [0, 1]");
  if (rrc_span_symbols <= 0 || (rrc_span_symbols * samples_per_symbol) % 2 != 0) {
    throw ConfigError("filter span must be positive with an even span * samples_per_symbol");
  }
  if (window_advance < 0 || window_advance > cp_length) {
    throw ConfigError("window advance must lie in [0, N_cp]");
  }
}

PulseShaping make_pulse_shaping(const OfdmConfig& config) {
  config.validate();
  SampledSignal g = rrc_filter(config.rrc_roll_off, config.rrc_span_symbols, config.samples_per_symbol,
                               config.sample_interval());
  return {g, g};
}

SpectrumVector hermitian_frame(std::span<const Complex> data_symbols, std::size_t n, double sample_interval) {
  if (n < 4 || n % 2 != 0) throw ConfigError("frame size must be even and >= 4");
  const std::size_t half = n / 2;
  if (data_symbols.size() != half - 1) {
    throw ConfigError("a frame of " + std::to_string(n) + " bins carries " + std::to_string(half - 1) +
                      " data symbols, got " + std::to_string(data_symbols.size()));
  }
  std::vector<Complex> bins(n);
  for (std::size_t k = 1; k < half; ++k) {
    bins[k] = data_symbols[k - 1];
    bins[n - k] = std::conj(data_symbols[k - 1]);
  }
  return SpectrumVector{std::move(bins), sample_interval};
}

std::vector<Complex> data_bins(const SpectrumVector& spectrum) {
  const std::size_t half = spectrum.size() / 2;
  if (half < 2) throw ConfigError("spectrum too short to carry data bins");
  return {spectrum.bins.begin() + 1, spectrum.bins.begin() + static_cast<std::ptrdiff_t>(half)};
}

std::vector<Complex> add_cp(std::span<const Complex> x, int cp_length) {
  if (cp_length < 0 || static_cast<std::size_t>(cp_length) >= x.size()) {
    throw ConfigError("cyclic prefix length must lie in [0, N)");
  }
  std::vector<Complex> out;
  out.reserve(x.size() + static_cast<std::size_t>(cp_length));
  out.insert(out.end(), x.end() - cp_length, x.end());
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

std::vector<Complex> remove_cp(std::span<const Complex> y, std::size_t n, int cp_length, int advance) {
  if (cp_length < 0 || static_cast<std::size_t>(cp_length) >= n) {
    throw ConfigError("cyclic prefix length must lie in [0, N)");
  }
  if (advance < 0 || advance > cp_length) throw ConfigError("window advance must lie in [0, N_cp]");
  if (y.size() < n + static_cast<std::size_t>(cp_length)) throw ConfigError("received frame is too short");
  const std::size_t first = static_cast<std::size_t>(cp_length - advance);
  const auto q = static_cast<std::size_t>(advance);
  std::vector<Complex> out(n);
  for (std::size_t p = 0; p < n; ++p) out[p] = y[first + (p + q) % n];
  return out;
}

SampledSignal shape_waveform(std::span<const Complex> frame_samples, const SampledSignal& g_t,
                             int samples_per_symbol, std::int64_t start_symbol) {
  if (samples_per_symbol <= 0) throw ConfigError("samples per symbol must be positive");
  if (frame_samples.empty()) throw ConfigError("cannot shape an empty frame");
  const auto sps = static_cast<std::size_t>(samples_per_symbol);
  const auto& g = g_t.samples();
  std::vector<Complex> out((frame_samples.size() - 1) * sps + g.size());
  for (std::size_t i = 0; i < frame_samples.size(); ++i) {
    const Complex x = frame_samples[i];
    if (x == Complex{}) continue;
    Complex* dst = out.data() + i * sps;
    for (std::size_t j = 0; j < g.size(); ++j) dst[j] += x * g[j];
  }
  return SampledSignal(std::move(out), g_t.sample_interval(), start_symbol * samples_per_symbol + g_t.start_offset());
}

TransmitLevels source_levels(const LinkBudget& budget) {
  return {std::sqrt(budget.source_power()) * budget.responsivity, budget.responsivity, budget.noise_variance()};
}

SampledSignal transmit_through(const PulseShaping& shaping, int samples_per_symbol, const SampledSignal& h_signal,
                               const SampledSignal& h_noise, const TransmitLevels& levels,
                               const SampledSignal& waveform, std::uint64_t seed) {
  const double dt = waveform.sample_interval();
  SampledSignal total = convolve(waveform, h_signal).scaled(levels.amplitude);

  if (levels.noise_variance > 0.0 && levels.relay_scale != 0.0 && !h_noise.is_zero()) {
    std::mt19937_64 rng(detail::mix_seed(seed, 1));
    std::normal_distribution<double> gauss(0.0, std::sqrt(levels.noise_variance));
    const std::int64_t sps = samples_per_symbol;
    const auto span = static_cast<std::int64_t>(shaping.g_t.size());
    const std::int64_t n_lo = floor_div(waveform.start_offset() - h_noise.end_offset() - span, sps) - 1;
    const std::int64_t n_hi = floor_div(waveform.end_offset() - h_noise.start_offset() + span, sps) + 1;
    std::vector<Complex> v(static_cast<std::size_t>(n_hi - n_lo + 1));
    for (auto& s : v) s = gauss(rng);
    const SampledSignal relay_noise = shape_waveform(v, shaping.g_t, samples_per_symbol, n_lo);
    total = add(total, convolve(relay_noise, h_noise).scaled(levels.relay_scale));
  }

  if (levels.noise_variance > 0.0) {
    std::mt19937_64 rng(detail::mix_seed(seed, 2));
    std::normal_distribution<double> gauss(0.0, std::sqrt(levels.noise_variance / dt));
    std::vector<Complex> noisy(total.samples());
    for (auto& s : noisy) s += gauss(rng);
    total = SampledSignal(std::move(noisy), dt, total.start_offset());
  }
  return convolve(total, shaping.g_r);
}

SpectrumVector symbol_rate_response(const SampledSignal& h, const PulseShaping& shaping, const OfdmConfig& config) {
  const SampledSignal bl = band_limited_channel(h, shaping.g_t, shaping.g_r);
  const auto n = static_cast<std::int64_t>(config.n_subcarriers);
  const std::int64_t sps = config.samples_per_symbol;
  std::vector<Complex> folded(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < bl.size(); ++i) {
    const std::int64_t index = bl.start_offset() + static_cast<std::int64_t>(i);
    if (positive_mod(index, sps) != 0) continue;
    folded[static_cast<std::size_t>(positive_mod(floor_div(index, sps), n))] += bl.samples()[i];
  }
  detail::fft_inplace(folded, false);
  return SpectrumVector{std::move(folded), config.symbol_interval};
}

SpectrumVector frame_observation(const SampledSignal& y, const OfdmConfig& config, std::int64_t start_symbol) {
  const auto n = static_cast<std::size_t>(config.n_subcarriers);
  const std::int64_t sps = config.samples_per_symbol;
  const std::int64_t first = start_symbol + config.cp_length - config.window_advance;
  const auto q = static_cast<std::size_t>(config.window_advance);
  std::vector<Complex> window(n);
  for (std::size_t p = 0; p < n; ++p) {
    window[p] = y.at((first + static_cast<std::int64_t>((p + q) % n)) * sps);
  }
  return dft(SampledSignal(std::move(window), config.symbol_interval, 0), n);
}

std::vector<Complex> receive_frame(const SampledSignal& y, const OfdmConfig& config, const SpectrumVector& h_freq,
                                   double amplitude, std::int64_t start_symbol) {
  const auto n = static_cast<std::size_t>(config.n_subcarriers);
  if (h_freq.size() != n) throw ConfigError("channel response has the wrong number of bins");
  const SpectrumVector obs = frame_observation(y, config, start_symbol);
  std::vector<Complex> out(n / 2 - 1);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const Complex g = amplitude * h_freq.bins[k];
    if (std::abs(h_freq.bins[k]) < 1e-15 || g == Complex{}) {
      throw DeadSubcarrierError("subcarrier " + std::to_string(k) + " has no channel gain", k);
    }
    out[k - 1] = obs.bins[k] / g;
  }
  return out;
}

}  // namespace vlcrelay
