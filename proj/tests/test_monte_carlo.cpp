#include <gtest/gtest.h>

#include <cmath>

#include "vlcrelay/analysis.hpp"
#include "vlcrelay/errors.hpp"
#include "vlcrelay/monte_carlo.hpp"
#include "vlcrelay/scenario.hpp"

using namespace vlcrelay;

namespace {

OfdmConfig flat_config() {
  OfdmConfig c;
  c.samples_per_symbol = 8;
  return c;
}

// Flat channels without LED filtering on the coarse grid.
RelayLink flat_link() {
  const OfdmConfig cfg = flat_config();
  const double dt = cfg.sample_interval();
  RelayChannelSet ch{delayed_impulse(0.0, 1.0, dt), delayed_impulse(0.0, 1.0, dt), delayed_impulse(0.0, 1.0, dt),
                     SampledSignal::zeros(1, dt), std::nullopt, "synthetic"};
  return RelayLink(ch, cfg);
}

const RelayLink& office_link() {
  static const RelayLink link = [] {
    OfdmConfig cfg;
    return RelayLink(synthesize_relay_channels(default_office_room(), {}, cfg.sample_interval()), cfg);
  }();
  return link;
}

LinkBudget budget_dbm(double dbm, double noise_psd = 1e-20) {
  LinkBudget b;
  b.noise_psd = noise_psd;
  return b.with_power(LinkBudget::dbm_to_watts(dbm), 0.5);
}

bool overlap(const McReport& a, const McReport& b) { return a.ci_lo <= b.ci_hi && b.ci_lo <= a.ci_hi; }

}  // namespace

TEST(Wilson, ClosedForm) {
  const auto [lo, hi] = wilson_interval(0, 100);
  EXPECT_NEAR(lo, 0.0, 1e-15);
  const double z = kWilsonZ95;
  EXPECT_NEAR(hi, z * z / 100.0 / (1.0 + z * z / 100.0), 1e-15);
  const auto [a, b] = wilson_interval(30, 100);
  const double p = 0.3;
  const double n = 100.0;
  const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
  const double half = z / (1 + z * z / n) * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n));
  EXPECT_NEAR(a, centre - half, 1e-15);
  EXPECT_NEAR(b, centre + half, 1e-15);
}

TEST(MonteCarlo, NoiselessFlatChannelIsErrorFree) {
  const RelayLink link = flat_link();
  const std::vector<McPoint> pts{{0.0, 0.5, std::nullopt}};
  for (const auto& s : {ModulationScheme::psk2(), ModulationScheme::qam(4), ModulationScheme::qam(64)}) {
    const auto rep = run_monte_carlo(link, s, RelayMode::direct, budget_dbm(0.0, 0.0), pts, {20000, 3, 1});
    ASSERT_EQ(rep.size(), 1u);
    EXPECT_EQ(rep[0].bit_errors, 0u) << s.name();
    EXPECT_GE(rep[0].bits_sent, 20000u);
  }
}

TEST(MonteCarlo, NoiselessRelayModesAreErrorFree) {
  const std::vector<McPoint> pts{{10.0, 0.6, std::nullopt}};
  for (RelayMode mode : {RelayMode::half_duplex, RelayMode::full_duplex}) {
    const auto rep =
        run_monte_carlo(office_link(), ModulationScheme::qam(16), mode, budget_dbm(0.0, 0.0), pts, {10000, 1, 1});
    EXPECT_EQ(rep[0].bit_errors, 0u) << to_string(mode);
  }
}

TEST(MonteCarlo, SixDecibelPskMatchesClosedForm) {
  const RelayLink link = flat_link();
  const std::vector<McPoint> pts{{0.0, 0.5, 6.0}};
  const auto rep = run_monte_carlo(link, ModulationScheme::psk2(), RelayMode::direct, budget_dbm(0.0), pts,
                                   {300000, 11, 0});
  const double expected = 0.5 * std::erfc(std::sqrt(std::pow(10.0, 0.6)));
  EXPECT_LE(rep[0].ci_lo, expected);
  EXPECT_GE(rep[0].ci_hi, expected);
}

TEST(MonteCarlo, SeedDeterminesReport) {
  const RelayLink link = flat_link();
  const std::vector<McPoint> pts{{0.0, 0.5, 4.0}, {0.0, 0.5, 2.0}};
  const auto s = ModulationScheme::qam(4);
  const LinkBudget b = budget_dbm(0.0);
  const auto a = run_monte_carlo(link, s, RelayMode::direct, b, pts, {50000, 5, 1});
  const auto a4 = run_monte_carlo(link, s, RelayMode::direct, b, pts, {50000, 5, 4});
  const auto c = run_monte_carlo(link, s, RelayMode::direct, b, pts, {50000, 6, 1});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(a[i].bit_errors, a4[i].bit_errors);
    EXPECT_EQ(a[i].bits_sent, a4[i].bits_sent);
    EXPECT_EQ(a[i].rng_seed, a4[i].rng_seed);
    EXPECT_NE(a[i].rng_seed, c[i].rng_seed);
    EXPECT_TRUE(overlap(a[i], c[i]));
  }
  EXPECT_NE(a[0].rng_seed, a[1].rng_seed);
}

TEST(MonteCarlo, FullDuplexAgreesWithAnalytic) {
  const LinkModel model(office_link());
  const LinkBudget b = budget_dbm(10.0);
  const std::vector<McPoint> pts{{10.0, 0.5, std::nullopt}};
  const auto s = ModulationScheme::psk2();
  const auto rep = run_monte_carlo(office_link(), s, RelayMode::full_duplex, b, pts, {20000, 2, 0});
  const double analytic = model.average_ber(RelayMode::full_duplex, s, b.with_power(b.p_total_w, 0.5));
  EXPECT_LE(rep[0].ci_lo, analytic);
  EXPECT_GE(rep[0].ci_hi, analytic);
}

TEST(MonteCarlo, RejectsUnsupportedRequests) {
  const RelayLink link = flat_link();
  const std::vector<McPoint> pts{{0.0, 0.5, std::nullopt}};
  EXPECT_THROW(run_monte_carlo(link, ModulationScheme::bpsk_sim(), RelayMode::direct, budget_dbm(0.0), pts, {}),
               ConfigError);
  EXPECT_THROW(run_monte_carlo(link, ModulationScheme::qam(8), RelayMode::direct, budget_dbm(0.0), pts, {}),
               ConfigError);
  EXPECT_THROW(run_monte_carlo(link, ModulationScheme::psk2(), RelayMode::direct, budget_dbm(0.0), pts, {999, 1, 1}),
               ConfigError);
  const std::vector<McPoint> snr_pts{{0.0, 0.5, 3.0}};
  EXPECT_THROW(
      run_monte_carlo(link, ModulationScheme::psk2(), RelayMode::full_duplex, budget_dbm(0.0), snr_pts, {10000, 1, 1}),
      ConfigError);
}
