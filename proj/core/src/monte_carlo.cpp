#include "vlcrelay/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "rng.hpp"
#include "vlcrelay/errors.hpp"
#include "vlcrelay/ofdm.hpp"

namespace vlcrelay {
namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
  return q;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

// Time-domain OFDM frame with cyclic prefix, real by construction.
std::vector<Complex> ofdm_frame(std::span<const Complex> symbols, const OfdmConfig& config) {
  const SampledSignal x = idft(hermitian_frame(symbols, static_cast<std::size_t>(config.n_subcarriers)));
  std::vector<Complex> real(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) real[i] = x.samples()[i].real();
  return add_cp(real, config.cp_length);
}

class PointSimulator {
 public:
  PointSimulator(const RelayLink& link, const ModulationScheme& scheme, RelayMode mode, LinkBudget budget,
                 const McPoint& point)
      : link_(link), scheme_(scheme), mode_(mode), budget_(budget) {
    const auto& config = link_.config();
    const double dt = config.sample_interval();
    zero_ = SampledSignal::zeros(1, dt);
    const double r = budget_.responsivity;

    if (point.per_bin_snr_db) {
      if (mode_ != RelayMode::direct) throw ConfigError("per-subcarrier SNR points are only defined for direct mode");
      double mean_gain = 0.0;
      const int bins = config.data_subcarriers();
      for (int k = 1; k <= bins; ++k) mean_gain += std::norm(link_.h_sd_freq().bins[static_cast<std::size_t>(k)]);
      mean_gain /= bins;
      const double snr = std::pow(10.0, *point.per_bin_snr_db / 10.0);
      budget_.noise_psd = budget_.p_total_w * r * r * mean_gain / snr / budget_.noise_bandwidth_hz;
    }
    sigma2_ = budget_.noise_variance();

    switch (mode_) {
      case RelayMode::direct:
        h_signal_ = link_.channels().c_sd_eff;
        h_noise_ = zero_;
        levels_ = {std::sqrt(budget_.p_total_w) * r, 0.0, sigma2_};
        h_freq_ = link_.h_sd_freq();
        break;
      case RelayMode::full_duplex: {
        const EndToEndCir fd = link_.full_duplex(budget_);
        h_signal_ = fd.signal;
        h_noise_ = fd.noise;
        levels_ = source_levels(budget_);
        h_freq_ = symbol_rate_response(h_signal_, link_.shaping(), config);
        break;
      }
      case RelayMode::half_duplex: {
        g_a_ = link_.g_a(budget_);
        h_signal_ = link_.channels().c_sd_eff;
        h_noise_ = zero_;
        levels_ = {std::sqrt(budget_.source_power()) * r, 0.0, sigma2_};
        const auto& sd = link_.h_sd_freq().bins;
        const auto& sr = link_.h_sr_freq().bins;
        const auto& rd = link_.h_rd_freq().bins;
        const std::size_t n = sd.size();
        a1_.resize(n);
        a2_.resize(n);
        f2_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
          a1_[k] = levels_.amplitude * sd[k];
          a2_[k] = levels_.amplitude * r * g_a_ * sr[k] * rd[k];
          f2_[k] = 1.0 + std::norm(r * g_a_ * rd[k]);
        }
        break;
      }
    }
  }

  // Bit errors in one frame.
  std::uint64_t run_frame(std::mt19937_64& engine) {
    const auto& config = link_.config();
    const auto bps = static_cast<std::size_t>(scheme_.bits_per_symbol());
    const auto n_data = static_cast<std::size_t>(config.data_subcarriers());
    std::vector<std::uint8_t> bits(n_data * bps);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (i % 64 == 0) word = engine();
      bits[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
    }
    const std::uint64_t noise_seed = engine();

    const std::vector<Complex> symbols = map_bits(bits, scheme_);
    const SampledSignal waveform = shape_waveform(ofdm_frame(symbols, config), link_.shaping().g_t,
                                                  config.samples_per_symbol);
    std::vector<Complex> equalized;
    if (mode_ == RelayMode::half_duplex) {
      equalized = half_duplex_frame(waveform, noise_seed);
    } else {
      const SampledSignal y = transmit_through(link_.shaping(), config.samples_per_symbol, h_signal_, h_noise_,
                                               levels_, waveform, noise_seed);
      equalized = receive_frame(y, config, h_freq_, levels_.amplitude);
    }
    const std::vector<std::uint8_t> decided = ml_detect(equalized, scheme_);
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) errors += bits[i] != decided[i] ? 1u : 0u;
    return errors;
  }

 private:
  std::vector<Complex> half_duplex_frame(const SampledSignal& waveform, std::uint64_t seed) {
    const auto& config = link_.config();
    const int sps = config.samples_per_symbol;
    const auto& shaping = link_.shaping();
    const double r = budget_.responsivity;

    // Slot 1: the source reaches the destination and the relay.
    const SampledSignal y_d1 = transmit_through(shaping, sps, h_signal_, zero_, levels_, waveform,
                                                detail::mix_seed(seed, 1));
    const SampledSignal y_r = transmit_through(shaping, sps, link_.channels().c_sr_eff, zero_, levels_, waveform,
                                               detail::mix_seed(seed, 2));
    // The relay samples its matched-filter output at the symbol rate,
    // amplifies and retransmits it.
    const std::int64_t first = ceil_div(y_r.start_offset(), sps);
    const std::int64_t last = floor_div(y_r.end_offset() - 1, sps);
    std::vector<Complex> forwarded(static_cast<std::size_t>(last - first + 1));
    for (std::int64_t n = first; n <= last; ++n) {
      forwarded[static_cast<std::size_t>(n - first)] = g_a_ * y_r.at(n * sps).real();
    }
    const SampledSignal relay_waveform = shape_waveform(forwarded, shaping.g_t, sps, first);
    // Slot 2: relay -> destination.
    const TransmitLevels relay_levels{r, 0.0, sigma2_};
    const SampledSignal y_d2 = transmit_through(shaping, sps, link_.c_rd(), zero_, relay_levels, relay_waveform,
                                                detail::mix_seed(seed, 3));

    const SpectrumVector obs1 = frame_observation(y_d1, config);
    const SpectrumVector obs2 = frame_observation(y_d2, config);
    const auto n_data = static_cast<std::size_t>(config.data_subcarriers());
    std::vector<Complex> out(n_data);
    for (std::size_t k = 1; k <= n_data; ++k) {
      const double weight = std::norm(a1_[k]) + std::norm(a2_[k]) / f2_[k];
      if (!(weight > 1e-300)) {
        throw DeadSubcarrierError("subcarrier " + std::to_string(k) + " has no gain on either hop", k);
      }
      out[k - 1] = (std::conj(a1_[k]) * obs1.bins[k] + std::conj(a2_[k]) * obs2.bins[k] / f2_[k]) / weight;
    }
    return out;
  }

  const RelayLink& link_;
  const ModulationScheme& scheme_;
  RelayMode mode_;
  LinkBudget budget_;
  double sigma2_ = 0.0;
  double g_a_ = 0.0;
  SampledSignal zero_ = SampledSignal::zeros(1, 1.0);
  SampledSignal h_signal_ = zero_;
  SampledSignal h_noise_ = zero_;
  TransmitLevels levels_;
  SpectrumVector h_freq_;
  std::vector<Complex> a1_, a2_;
  std::vector<double> f2_;
};

}  // namespace

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double z) {
  if (trials == 0) throw ConfigError("Wilson interval needs at least one trial");
  if (errors > trials) throw ConfigError("more errors than trials");
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(errors) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

namespace {

// Positive integer value of VLC_SIM_THREADS, or 0 when unset or malformed.
unsigned env_thread_cap() {
  const char* env = std::getenv("VLC_SIM_THREADS");
  if (env == nullptr) return 0;
  char* end = nullptr;
  const long cap = std::strtol(env, &end, 10);
  return (end != env && *end == '\0' && cap > 0) ? static_cast<unsigned>(cap) : 0;
}

}  // namespace

unsigned default_thread_count() {
  const unsigned n = std::max(1u, std::thread::hardware_concurrency());
  const unsigned cap = env_thread_cap();
  return cap > 0 ? std::min(n, cap) : n;
}

std::vector<McReport> run_monte_carlo(const RelayLink& link, const ModulationScheme& scheme, RelayMode mode,
                                      const LinkBudget& budget, std::span<const McPoint> grid,
                                      const McSettings& settings) {
  if (!scheme.has_mapper()) {
    throw ConfigError(scheme.name() + " has no waveform realization; only its closed-form BER is available");
  }
  if (settings.n_bits < 10000) throw ConfigError("Monte Carlo needs at least 10^4 bits per point");
  if (grid.empty()) throw ConfigError("Monte Carlo grid is empty");
  budget.validate();

  const auto bits_per_frame =
      static_cast<std::uint64_t>(link.config().data_subcarriers()) * static_cast<std::uint64_t>(scheme.bits_per_symbol());
  const std::uint64_t frames = (settings.n_bits + bits_per_frame - 1) / bits_per_frame;

  std::vector<McReport> reports(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const McPoint& point = grid[i];
        const LinkBudget point_budget = budget.with_power(LinkBudget::dbm_to_watts(point.power_dbm), point.k_p);
        point_budget.validate();
        const std::uint64_t stream = detail::mix_seed(settings.seed, i);
        std::mt19937_64 engine(stream);
        PointSimulator sim(link, scheme, mode, point_budget, point);
        std::uint64_t errors = 0;
        for (std::uint64_t f = 0; f < frames; ++f) errors += sim.run_frame(engine);
        McReport& rep = reports[i];
        rep.bits_sent = frames * bits_per_frame;
        rep.bit_errors = errors;
        rep.ber = static_cast<double>(errors) / static_cast<double>(rep.bits_sent);
        std::tie(rep.ci_lo, rep.ci_hi) = wilson_interval(errors, rep.bits_sent);
        rep.rng_seed = stream;
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  unsigned threads = settings.threads > 0 ? settings.threads : default_thread_count();
  if (const unsigned cap = env_thread_cap(); cap > 0) threads = std::min(threads, cap);
  threads = std::min<unsigned>(threads, static_cast<unsigned>(grid.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return reports;
}

}  // namespace vlcrelay
