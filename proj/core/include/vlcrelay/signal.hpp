#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace vlcrelay {

using Complex = std::complex<double>;

/// Uniformly sampled sequence on an absolute time grid.
///
/// Sample i sits at time (start_offset + i) * sample_interval. Values are
/// continuous-time amplitudes: a Dirac impulse of weight w is represented by a
/// single sample of height w / sample_interval, and convolve() scales the
/// discrete sum by sample_interval so that integrals are approximated
/// consistently.
class SampledSignal {
 public:
  SampledSignal(std::vector<Complex> samples, double sample_interval, std::int64_t start_offset = 0);

  static SampledSignal from_real(std::span<const double> samples, double sample_interval,
                                 std::int64_t start_offset = 0);
  static SampledSignal zeros(std::size_t length, double sample_interval, std::int64_t start_offset = 0);

  const std::vector<Complex>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_interval() const noexcept { return sample_interval_; }
  std::int64_t start_offset() const noexcept { return start_offset_; }
  std::int64_t end_offset() const noexcept {
    return start_offset_ + static_cast<std::int64_t>(samples_.size());
  }

  // Value at absolute grid index; zero outside the stored support.
  Complex at(std::int64_t index) const noexcept;
  double time_of(std::size_t i) const noexcept {
    return static_cast<double>(start_offset_ + static_cast<std::int64_t>(i)) * sample_interval_;
  }

  double energy() const noexcept;   // sum |x|^2 * dt
  double l1_norm() const noexcept;  // sum |x| * dt
  Complex integral() const noexcept;  // sum x * dt
  bool is_zero() const noexcept;
  bool is_real(double tolerance = 0.0) const noexcept;
  std::vector<double> real_part() const;
  // Absolute index of the sample with the largest magnitude (first on ties).
  std::int64_t peak_index() const noexcept;

  SampledSignal scaled(Complex factor) const;
  SampledSignal shifted(std::int64_t samples) const;

 private:
  std::vector<Complex> samples_;
  double sample_interval_;
  std::int64_t start_offset_;
};

/// N frequency bins of a sequence; bin k corresponds to k / (N * sample_interval).
struct SpectrumVector {
  std::vector<Complex> bins;
  double sample_interval = 1.0;

  std::size_t size() const noexcept { return bins.size(); }
  double bin_frequency(std::size_t k) const noexcept {
    return static_cast<double>(k) / (static_cast<double>(bins.size()) * sample_interval);
  }
};

// True when two sample intervals describe the same grid.
bool same_grid(double dt_a, double dt_b) noexcept;

/// Continuous-time convolution approximation: dt * sum a[m] b[n-m].
/// Output start offset is the sum of the input offsets. Throws ConfigError on
/// mismatched sample intervals.
SampledSignal convolve(const SampledSignal& a, const SampledSignal& b);

// Sum of two signals on the same grid over the union of their supports.
SampledSignal add(const SampledSignal& a, const SampledSignal& b);

/// Unitary DFT, X[k] = N^-1/2 sum x[n] exp(-j 2 pi n k / N), of the first N
/// samples (zero padded). The start offset is ignored.
SpectrumVector dft(const SampledSignal& x, std::size_t n);
/// Unitary inverse DFT; the result starts at offset 0.
SampledSignal idft(const SpectrumVector& spectrum);

/// Transfer-function samples dt * sum h[n] exp(-j 2 pi n k / N) of an impulse
/// response (bin 0 is the DC gain). Indexing is relative to the first sample.
SpectrumVector channel_spectrum(const SampledSignal& h, std::size_t n);

/// Continuous-frequency response dt * sum h[n] exp(-j 2 pi f t_n) using
/// absolute sample times.
Complex frequency_response(const SampledSignal& h, double frequency_hz);

/// Root-raised-cosine pulse of span_symbols * samples_per_symbol + 1 taps,
/// centred on t = 0. The discrete taps have unit sum of squares; the stored
/// samples are taps / sqrt(sample_interval) so that energy() is also 1.
SampledSignal rrc_filter(double roll_off, int span_symbols, int samples_per_symbol,
                         double sample_interval = 1.0);

/// gain * delta(t - delay) on the grid: one sample of height gain / dt at
/// index delay / dt. The delay must be a non-negative integer multiple of dt.
SampledSignal delayed_impulse(double delay, double gain, double sample_interval);

namespace detail {
// Exposed for equivalence tests; convolve() picks between them.
std::vector<Complex> convolve_direct(std::span<const Complex> a, std::span<const Complex> b);
std::vector<Complex> convolve_fft(std::span<const Complex> a, std::span<const Complex> b);
}  // namespace detail

}  // namespace vlcrelay
