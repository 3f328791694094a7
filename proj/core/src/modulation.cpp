#include "vlcrelay/modulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

int log2_exact(int m) {
  int bits = 0;
  while ((1 << bits) < m) ++bits;
  return (1 << bits) == m ? bits : -1;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

ModulationScheme::ModulationScheme(SchemeKind kind, int order, std::string name, std::vector<Complex> points)
    : kind_(kind), order_(order), bits_per_symbol_(log2_exact(order)), name_(std::move(name)),
      points_(std::move(points)) {}

ModulationScheme ModulationScheme::psk2() {
  return ModulationScheme(SchemeKind::psk2, 2, "2-PSK", {Complex(1.0, 0.0), Complex(-1.0, 0.0)});
}

ModulationScheme ModulationScheme::bpsk_sim() { return ModulationScheme(SchemeKind::bpsk_sim, 2, "BPSK-SIM", {}); }

ModulationScheme ModulationScheme::qam(int order) {
  const int bits = order >= 4 ? log2_exact(order) : -1;
  if (bits < 2) throw ConfigError("QAM order must be a power of two >= 4, got " + std::to_string(order));
  const std::string name = std::to_string(order) + "-QAM";
  if (bits % 2 != 0) return ModulationScheme(SchemeKind::qam, order, name, {});

  // Square grid: the high half of the label picks the in-phase level, the low
  // half the quadrature level, each Gray coded along its axis.
  const int side = 1 << (bits / 2);
  const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  std::vector<double> level_of_gray(static_cast<std::size_t>(side));
  for (int pos = 0; pos < side; ++pos) {
    level_of_gray[static_cast<std::size_t>(pos ^ (pos >> 1))] = 2.0 * pos - (side - 1);
  }
  std::vector<Complex> points(static_cast<std::size_t>(order));
  for (int label = 0; label < order; ++label) {
    const int gi = label >> (bits / 2);
    const int gq = label & (side - 1);
    points[static_cast<std::size_t>(label)] =
        Complex(level_of_gray[static_cast<std::size_t>(gi)], level_of_gray[static_cast<std::size_t>(gq)]) * scale;
  }
  return ModulationScheme(SchemeKind::qam, order, name, std::move(points));
}

ModulationScheme ModulationScheme::from_name(const std::string& name) {
  const std::string key = upper(name);
  if (key == "2-PSK" || key == "BPSK" || key == "2PSK") return psk2();
  if (key == "BPSK-SIM" || key == "BPSKSIM") return bpsk_sim();
  const auto dash = key.find("-QAM");
  if (dash != std::string::npos && dash > 0 && dash + 4 == key.size()) {
    const std::string digits = key.substr(0, dash);
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }) &&
        digits.size() < 6) {
      return qam(std::stoi(digits));
    }
  }
  throw ConfigError("unknown modulation scheme '" + name + "'");
}

std::size_t nearest_point(Complex symbol, const ModulationScheme& scheme) {
  const auto& pts = scheme.constellation();
  std::size_t best = 0;
  double best_d = std::norm(symbol - pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d = std::norm(symbol - pts[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<Complex> map_bits(std::span<const std::uint8_t> bits, const ModulationScheme& scheme) {
  if (!scheme.has_mapper()) throw ConfigError(scheme.name() + " has no constellation mapper");
  const auto k = static_cast<std::size_t>(scheme.bits_per_symbol());
  if (bits.size() % k != 0) {
    throw ConfigError(std::to_string(bits.size()) + " bits do not divide into " + std::to_string(k) +
                      "-bit symbols");
  }
  std::vector<Complex> out(bits.size() / k);
  for (std::size_t s = 0; s < out.size(); ++s) {
    std::size_t label = 0;
    for (std::size_t b = 0; b < k; ++b) label = (label << 1) | (bits[s * k + b] & 1u);
    out[s] = scheme.constellation()[label];
  }
  return out;
}

std::vector<std::uint8_t> ml_detect(std::span<const Complex> equalized, const ModulationScheme& scheme) {
  if (!scheme.has_mapper()) throw ConfigError(scheme.name() + " has no constellation mapper");
  const auto k = static_cast<std::size_t>(scheme.bits_per_symbol());
  std::vector<std::uint8_t> bits(equalized.size() * k);
  for (std::size_t s = 0; s < equalized.size(); ++s) {
    const std::size_t label = nearest_point(equalized[s], scheme);
    for (std::size_t b = 0; b < k; ++b) bits[s * k + b] = static_cast<std::uint8_t>((label >> (k - 1 - b)) & 1u);
  }
  return bits;
}

std::vector<std::uint8_t> demap_symbols(std::span<const Complex> symbols, const ModulationScheme& scheme) {
  return ml_detect(symbols, scheme);
}

}  // namespace vlcrelay
