#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vlcrelay {

// Invalid parameter or incompatible inputs (mismatched grids, out-of-range values).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed input file. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The full-duplex loop-interference series does not converge.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& message, double loop_gain)
      : std::runtime_error(message), loop_gain_(loop_gain) {}

  double loop_gain() const noexcept { return loop_gain_; }

 private:
  double loop_gain_;
};

// A data subcarrier has (numerically) zero channel gain and cannot be equalized.
class DeadSubcarrierError : public std::runtime_error {
 public:
  DeadSubcarrierError(const std::string& message, std::size_t bin)
      : std::runtime_error(message), bin_(bin) {}

  std::size_t bin() const noexcept { return bin_; }

 private:
  std::size_t bin_;
};

}  // namespace vlcrelay
