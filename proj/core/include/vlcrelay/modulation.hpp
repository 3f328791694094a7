#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vlcrelay/signal.hpp"

namespace vlcrelay {

enum class SchemeKind { psk2, qam, bpsk_sim };

/// Constellation with Gray labels and its closed-form BER family.
///
/// constellation()[label] is the point carrying bit pattern `label` (MSB
/// first). Points have unit average energy. BPSK-SIM and non-square QAM orders
/// carry only the analytic BER formula; they have no mapper.
class ModulationScheme {
 public:
  static ModulationScheme psk2();
  static ModulationScheme qam(int order);
  static ModulationScheme bpsk_sim();
  // "2-PSK" (or "BPSK"), "<M>-QAM", "BPSK-SIM"; case-insensitive.
  static ModulationScheme from_name(const std::string& name);

  SchemeKind kind() const noexcept { return kind_; }
  int order() const noexcept { return order_; }
  int bits_per_symbol() const noexcept { return bits_per_symbol_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Complex>& constellation() const noexcept { return points_; }
  bool has_mapper() const noexcept { return !points_.empty(); }

 private:
  ModulationScheme(SchemeKind kind, int order, std::string name, std::vector<Complex> points);

  SchemeKind kind_;
  int order_;
  int bits_per_symbol_;
  std::string name_;
  std::vector<Complex> points_;
};

// Bits are 0/1 bytes. Throws ConfigError when the count is not a multiple of
// bits_per_symbol or the scheme has no mapper.
std::vector<Complex> map_bits(std::span<const std::uint8_t> bits, const ModulationScheme& scheme);
std::vector<std::uint8_t> demap_symbols(std::span<const Complex> symbols, const ModulationScheme& scheme);

// Index of the nearest constellation point; ties go to the lowest index.
std::size_t nearest_point(Complex symbol, const ModulationScheme& scheme);

/// Per-subcarrier maximum-likelihood decision on equalized symbols.
std::vector<std::uint8_t> ml_detect(std::span<const Complex> equalized, const ModulationScheme& scheme);

}  // namespace vlcrelay
