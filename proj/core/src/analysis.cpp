#include "vlcrelay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double numerator, double noise) {
  if (noise > 0.0) return numerator / noise;
  return numerator > 0.0 ? kInf : 0.0;
}

}  // namespace

double snr_fd(Complex h_signal, Complex h_noise, const LinkBudget& budget, double g_a, FdNoiseGain noise_gain) {
  const double r = budget.responsivity;
  const double scale = noise_gain == FdNoiseGain::verbatim ? r * g_a : r;
  const double num = budget.source_power() * r * r * std::norm(h_signal);
  return ratio(num, budget.noise_variance() * (1.0 + std::norm(scale * h_noise)));
}

double snr_hd(Complex h_sd, Complex h_sr, Complex h_rd, const LinkBudget& budget, double g_a) {
  const double r = budget.responsivity;
  const double sigma2 = budget.noise_variance();
  const double p = budget.source_power();
  const double direct = ratio(2.0 * p * r * r * std::norm(h_sd), 2.0 * sigma2);
  const double relayed = ratio(2.0 * p * std::pow(r, 4) * g_a * g_a * std::norm(h_sr * h_rd),
                               2.0 * sigma2 * (1.0 + std::norm(r * g_a * h_rd)));
  return direct + relayed;
}

double snr_direct(Complex h_sd, const LinkBudget& budget) {
  const double r = budget.responsivity;
  return ratio(budget.p_total_w * r * r * std::norm(h_sd), budget.noise_variance());
}

double ber_per_subcarrier(double snr, const ModulationScheme& scheme, bool bpsk_sim_sqrt) {
  if (!(snr >= 0.0)) throw ConfigError("SNR must be non-negative, got " + std::to_string(snr));
  switch (scheme.kind()) {
    case SchemeKind::psk2:
      return 0.5 * std::erfc(std::sqrt(snr));
    case SchemeKind::bpsk_sim:
      return 0.5 * std::erfc(bpsk_sim_sqrt ? std::sqrt(snr) : snr);
    case SchemeKind::qam: {
      const double m = scheme.order();
      const double sqrt_m = std::sqrt(m);
      const double coef = (sqrt_m - 1.0) / (sqrt_m * std::log2(sqrt_m));
      return coef * std::erfc(std::sqrt(3.0 * snr / (2.0 * (m - 1.0))));
    }
  }
  return 0.5;
}

void SnrProfile::validate() const {
  if (per_bin.empty()) throw ConfigError("SNR profile is empty");
  for (double v : per_bin) {
    if (!(v >= 0.0) || std::isnan(v)) throw ConfigError("SNR profile holds a negative or NaN value");
  }
}

double ber_average_factor(int n_subcarriers) {
  if (n_subcarriers < 4 || n_subcarriers % 2 != 0) throw ConfigError("N must be even and >= 4");
  return 2.0 / (n_subcarriers - 2);
}

double average_ber(const SnrProfile& profile, const ModulationScheme& scheme, int n_subcarriers,
                   bool bpsk_sim_sqrt) {
  profile.validate();
  const double factor = ber_average_factor(n_subcarriers);
  if (profile.per_bin.size() != static_cast<std::size_t>(n_subcarriers / 2 - 1)) {
    throw ConfigError("SNR profile has " + std::to_string(profile.per_bin.size()) + " bins, expected " +
                      std::to_string(n_subcarriers / 2 - 1));
  }
  // Accumulate deviations from the first bin so that a flat profile returns
  // its single-bin value exactly.
  const double first = ber_per_subcarrier(profile.per_bin.front(), scheme, bpsk_sim_sqrt);
  double deviation = 0.0;
  for (std::size_t k = 1; k < profile.per_bin.size(); ++k) {
    deviation += ber_per_subcarrier(profile.per_bin[k], scheme, bpsk_sim_sqrt) - first;
  }
  return first + deviation * factor;
}

LinkModel::LinkModel(RelayLink link, AnalysisOptions options) : link_(std::move(link)), options_(options) {}

SnrProfile LinkModel::snr_profile(RelayMode mode, const LinkBudget& budget) const {
  budget.validate();
  const std::size_t bins = static_cast<std::size_t>(link_.config().data_subcarriers());
  const auto& sd = link_.h_sd_freq().bins;
  SnrProfile out{mode, std::vector<double>(bins)};
  switch (mode) {
    case RelayMode::direct:
      for (std::size_t k = 1; k <= bins; ++k) out.per_bin[k - 1] = snr_direct(sd[k], budget);
      break;
    case RelayMode::half_duplex: {
      const double g = link_.g_a(budget);
      const auto& sr = link_.h_sr_freq().bins;
      const auto& rd = link_.h_rd_freq().bins;
      for (std::size_t k = 1; k <= bins; ++k) out.per_bin[k - 1] = snr_hd(sd[k], sr[k], rd[k], budget, g);
      break;
    }
    case RelayMode::full_duplex: {
      const double g = link_.g_a(budget);
      const auto unit = link_.fd_unit(budget);
      for (std::size_t k = 1; k <= bins; ++k) {
        const Complex h_signal = sd[k] + g * unit->relayed_freq.bins[k];
        const Complex h_noise = g * unit->noise_freq.bins[k];
        out.per_bin[k - 1] = snr_fd(h_signal, h_noise, budget, g, options_.fd_noise_gain);
      }
      break;
    }
  }
  return out;
}

double LinkModel::average_ber(RelayMode mode, const ModulationScheme& scheme, const LinkBudget& budget) const {
  return vlcrelay::average_ber(snr_profile(mode, budget), scheme, link_.config().n_subcarriers,
                               options_.bpsk_sim_sqrt);
}

KpGrid KpGrid::table2() { return {0.0099, 0.99, 0.0099}; }

void KpGrid::validate() const {
  if (!(step > 0.0 && step <= 0.1)) throw ConfigError("K_p grid step must lie in (0, 0.1]");
  if (!(lo > 0.0 && hi < 1.0 && lo <= hi)) throw ConfigError("K_p grid must satisfy 0 < lo <= hi < 1");
}

std::vector<double> KpGrid::points() const {
  validate();
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  out.reserve(count + 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(std::min(lo + static_cast<double>(i) * step, hi));
  const auto pos = std::lower_bound(out.begin(), out.end(), 0.5);
  if (pos == out.end() || std::abs(*pos - 0.5) > 1e-12) out.insert(pos, 0.5);
  else *pos = 0.5;
  return out;
}

KpOptimum optimize_kp(const LinkModel& model, RelayMode mode, const ModulationScheme& scheme,
                      const LinkBudget& budget, const KpGrid& grid) {
  std::optional<KpOptimum> best;
  std::optional<DivergenceError> last_error;
  std::size_t evaluated = 0;
  for (double k : grid.points()) {
    double ber = 0.0;
    try {
      ber = model.average_ber(mode, scheme, budget.with_power(budget.p_total_w, k));
    } catch (const DivergenceError& e) {
      last_error = e;
      continue;
    }
    ++evaluated;
    if (!best || ber < best->ber) best = KpOptimum{k, ber, 0};
  }
  if (!best) {
    if (last_error) throw *last_error;
    throw ConfigError("K_p grid is empty");
  }
  best->evaluated = evaluated;
  return *best;
}

}  // namespace vlcrelay
