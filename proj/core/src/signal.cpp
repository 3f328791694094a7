#include "vlcrelay/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

bool all_real(std::span<const Complex> x) {
  return std::all_of(x.begin(), x.end(), [](const Complex& v) { return v.imag() == 0.0; });
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

SampledSignal::SampledSignal(std::vector<Complex> samples, double sample_interval, std::int64_t start_offset)
    : samples_(std::move(samples)), sample_interval_(sample_interval), start_offset_(start_offset) {
  if (!(sample_interval_ > 0.0) || !std::isfinite(sample_interval_)) {
    throw ConfigError("sample interval must be positive and finite, got " + std::to_string(sample_interval_));
  }
  if (samples_.empty()) throw ConfigError("a sampled signal needs at least one sample");
  for (const auto& v : samples_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ConfigError("sampled signal contains a non-finite value");
    }
  }
}

SampledSignal SampledSignal::from_real(std::span<const double> samples, double sample_interval,
                                       std::int64_t start_offset) {
  std::vector<Complex> values(samples.begin(), samples.end());
  return SampledSignal(std::move(values), sample_interval, start_offset);
}

SampledSignal SampledSignal::zeros(std::size_t length, double sample_interval, std::int64_t start_offset) {
  return SampledSignal(std::vector<Complex>(std::max<std::size_t>(length, 1)), sample_interval, start_offset);
}

Complex SampledSignal::at(std::int64_t index) const noexcept {
  const std::int64_t i = index - start_offset_;
  if (i < 0 || i >= static_cast<std::int64_t>(samples_.size())) return {};
  return samples_[static_cast<std::size_t>(i)];
}

double SampledSignal::energy() const noexcept {
  double sum = 0.0;
  for (const auto& v : samples_) sum += std::norm(v);
  return sum * sample_interval_;
}

double SampledSignal::l1_norm() const noexcept {
  double sum = 0.0;
  for (const auto& v : samples_) sum += std::abs(v);
  return sum * sample_interval_;
}

Complex SampledSignal::integral() const noexcept {
  Complex sum{};
  for (const auto& v : samples_) sum += v;
  return sum * sample_interval_;
}

bool SampledSignal::is_zero() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](const Complex& v) { return v == Complex{}; });
}

bool SampledSignal::is_real(double tolerance) const noexcept {
  return std::all_of(samples_.begin(), samples_.end(),
                     [tolerance](const Complex& v) { return std::abs(v.imag()) <= tolerance; });
}

std::vector<double> SampledSignal::real_part() const {
  std::vector<double> out(samples_.size());
  std::transform(samples_.begin(), samples_.end(), out.begin(), [](const Complex& v) { return v.real(); });
  return out;
}

std::int64_t SampledSignal::peak_index() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (std::abs(samples_[i]) > std::abs(samples_[best])) best = i;
  }
  return start_offset_ + static_cast<std::int64_t>(best);
}

SampledSignal SampledSignal::scaled(Complex factor) const {
  std::vector<Complex> out(samples_);
  for (auto& v : out) v *= factor;
  return SampledSignal(std::move(out), sample_interval_, start_offset_);
}

SampledSignal SampledSignal::shifted(std::int64_t samples) const {
  return SampledSignal(samples_, sample_interval_, start_offset_ + samples);
}

bool same_grid(double dt_a, double dt_b) noexcept {
  return std::abs(dt_a - dt_b) <= 1e-12 * std::max(std::abs(dt_a), std::abs(dt_b));
}

namespace detail {

std::vector<Complex> convolve_direct(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex ai = a[i];
    if (ai == Complex{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b[j];
  }
  return out;
}

std::vector<Complex> convolve_fft(std::span<const Complex> a, std::span<const Complex> b) {
  const std::size_t n_out = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(n_out);
  std::vector<Complex> fa(n), fb(n);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fft_inplace(fa, false);
  fft_inplace(fb, false);
  for (std::size_t k = 0; k < n; ++k) fa[k] *= fb[k];
  fft_inplace(fa, true);
  fa.resize(n_out);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : fa) v *= scale;
  return fa;
}

}  // namespace detail

SampledSignal convolve(const SampledSignal& a, const SampledSignal& b) {
  if (!same_grid(a.sample_interval(), b.sample_interval())) {
    throw ConfigError("cannot convolve signals with sample intervals " + std::to_string(a.sample_interval()) +
                      " and " + std::to_string(b.sample_interval()));
  }
  const auto& xa = a.samples();
  const auto& xb = b.samples();
  const std::size_t n_out = xa.size() + xb.size() - 1;
  const bool use_fft = n_out > 256 && std::min(xa.size(), xb.size()) > 32;
  std::vector<Complex> out = use_fft ? detail::convolve_fft(xa, xb) : detail::convolve_direct(xa, xb);
  const bool real = all_real(xa) && all_real(xb);
  const double dt = a.sample_interval();
  for (auto& v : out) v = real ? Complex(v.real() * dt, 0.0) : v * dt;
  return SampledSignal(std::move(out), dt, a.start_offset() + b.start_offset());
}

SampledSignal add(const SampledSignal& a, const SampledSignal& b) {
  if (!same_grid(a.sample_interval(), b.sample_interval())) {
    throw ConfigError("cannot add signals on different sample grids");
  }
  const std::int64_t start = std::min(a.start_offset(), b.start_offset());
  const std::int64_t end = std::max(a.end_offset(), b.end_offset());
  std::vector<Complex> out(static_cast<std::size_t>(end - start));
  for (std::size_t i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(a.start_offset() - start) + i] += a.samples()[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[static_cast<std::size_t>(b.start_offset() - start) + i] += b.samples()[i];
  return SampledSignal(std::move(out), a.sample_interval(), start);
}

SpectrumVector dft(const SampledSignal& x, std::size_t n) {
  if (n == 0) throw ConfigError("DFT size must be positive");
  std::vector<Complex> buf(n);
  std::copy_n(x.samples().begin(), std::min(n, x.size()), buf.begin());
  detail::fft_inplace(buf, false);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : buf) v *= scale;
  return SpectrumVector{std::move(buf), x.sample_interval()};
}

SampledSignal idft(const SpectrumVector& spectrum) {
  if (spectrum.bins.empty()) throw ConfigError("IDFT size must be positive");
  std::vector<Complex> buf(spectrum.bins);
  detail::fft_inplace(buf, true);
  const double scale = 1.0 / std::sqrt(static_cast<double>(buf.size()));
  for (auto& v : buf) v *= scale;
  return SampledSignal(std::move(buf), spectrum.sample_interval, 0);
}

SpectrumVector channel_spectrum(const SampledSignal& h, std::size_t n) {
  if (n == 0) throw ConfigError("DFT size must be positive");
  std::vector<Complex> buf(n);
  std::copy_n(h.samples().begin(), std::min(n, h.size()), buf.begin());
  detail::fft_inplace(buf, false);
  for (auto& v : buf) v *= h.sample_interval();
  return SpectrumVector{std::move(buf), h.sample_interval()};
}

Complex frequency_response(const SampledSignal& h, double frequency_hz) {
  Complex sum{};
  const double w = -2.0 * std::numbers::pi * frequency_hz;
  for (std::size_t i = 0; i < h.size(); ++i) {
    sum += h.samples()[i] * std::polar(1.0, w * h.time_of(i));
  }
  return sum * h.sample_interval();
}

SampledSignal rrc_filter(double roll_off, int span_symbols, int samples_per_symbol, double sample_interval) {
  if (!(roll_off >= 0.0 && roll_off <= 1.0)) {
    throw ConfigError("roll-off must lie in [0, 1], got " + std::to_string(roll_off));
  }
  if (span_symbols <= 0 || samples_per_symbol <= 0) {
    throw ConfigError("filter span and samples per symbol must be positive");
  }
  const std::int64_t half_product = static_cast<std::int64_t>(span_symbols) * samples_per_symbol;
  if (half_product % 2 != 0) {
    throw ConfigError("span_symbols * samples_per_symbol must be even for a symmetric odd-length filter");
  }
  const std::size_t length = static_cast<std::size_t>(half_product) + 1;
  const std::int64_t half = half_product / 2;
  const double pi = std::numbers::pi;
  const double beta = roll_off;

  std::vector<double> taps(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double t = static_cast<double>(static_cast<std::int64_t>(i) - half) / samples_per_symbol;
    double value;
    if (t == 0.0) {
      value = 1.0 - beta + 4.0 * beta / pi;
    } else if (beta > 0.0 && std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-12) {
      value = beta / std::sqrt(2.0) *
              ((1.0 + 2.0 / pi) * std::sin(pi / (4.0 * beta)) + (1.0 - 2.0 / pi) * std::cos(pi / (4.0 * beta)));
    } else {
      const double x = 4.0 * beta * t;
      value = (std::sin(pi * t * (1.0 - beta)) + x * std::cos(pi * t * (1.0 + beta))) / (pi * t * (1.0 - x * x));
    }
    taps[i] = value;
  }
  // Force exact even symmetry before normalizing.
  for (std::size_t i = 0; i < length / 2; ++i) taps[length - 1 - i] = taps[i];
  double sum_sq = 0.0;
  for (double v : taps) sum_sq += v * v;
  const double scale = 1.0 / std::sqrt(sum_sq * sample_interval);
  std::vector<Complex> samples(length);
  for (std::size_t i = 0; i < length; ++i) samples[i] = taps[i] * scale;
  return SampledSignal(std::move(samples), sample_interval, -half);
}

SampledSignal delayed_impulse(double delay, double gain, double sample_interval) {
  if (!(sample_interval > 0.0)) throw ConfigError("sample interval must be positive");
  if (delay < 0.0) throw ConfigError("delay must be non-negative");
  const double ratio = delay / sample_interval;
  const double index = std::round(ratio);
  if (std::abs(ratio - index) > 1e-9 * std::max(1.0, ratio)) {
    throw ConfigError("delay " + std::to_string(delay) + " s is not an integer multiple of the sample interval " +
                      std::to_string(sample_interval) + " s");
  }
  return SampledSignal({Complex(gain / sample_interval, 0.0)}, sample_interval, static_cast<std::int64_t>(index));
}

}  // namespace vlcrelay
