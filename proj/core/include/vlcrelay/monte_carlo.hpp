#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vlcrelay/modulation.hpp"
#include "vlcrelay/relay.hpp"
#include "vlcrelay/relay_link.hpp"

namespace vlcrelay {

struct McReport {
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  double ci_lo = 0.0;  // 95% Wilson interval
  double ci_hi = 0.0;
  std::uint64_t rng_seed = 0;  // stream seed of this grid point
};

inline constexpr double kWilsonZ95 = 1.959963984540054;

std::pair<double, double> wilson_interval(std::uint64_t errors, std::uint64_t trials, double z = kWilsonZ95);

/// One grid point. With per_bin_snr_db set (direct mode only) the noise
/// variance is chosen so that the mean per-subcarrier SNR of the direct link
/// equals that value and power_dbm only sets the signal scale.
struct McPoint {
  double power_dbm = 0.0;
  double k_p = 0.5;
  std::optional<double> per_bin_snr_db;
};

struct McSettings {
  std::uint64_t n_bits = 1000000;
  std::uint64_t seed = 1;
  // Worker threads; 0 picks VLC_SIM_THREADS or the hardware concurrency.
  unsigned threads = 0;
};

// Thread count used when McSettings::threads is 0.
unsigned default_thread_count();

/// Simulates whole OFDM frames through the selected relaying mode and counts
/// bit errors. Each grid point draws from its own stream derived from
/// (seed, point index), so results do not depend on the thread count.
///   direct: full budget P at the source over C_sd-eff
///   FD:     source at P K_p over h_signal with relay noise through h_noise
///   HD:     slot 1 source at P K_p to destination and relay; slot 2 relay
///           forwards G_A times its sampled observation; MRC per subcarrier
/// Throws ConfigError for schemes without a mapper and n_bits < 10^4.
std::vector<McReport> run_monte_carlo(const RelayLink& link, const ModulationScheme& scheme, RelayMode mode,
                                      const LinkBudget& budget, std::span<const McPoint> grid,
                                      const McSettings& settings);

}  // namespace vlcrelay
