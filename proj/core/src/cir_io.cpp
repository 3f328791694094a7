#include "vlcrelay/cir_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::optional<double> parse_keyed(std::string_view line, std::string_view key) {
  if (line.substr(0, key.size()) != key) return std::nullopt;
  line.remove_prefix(key.size());
  line = trim(line);
  if (line.empty() || line.front() != '=') return std::nullopt;
  line.remove_prefix(1);
  return parse_number(line);
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SampledSignal parse_cir(std::istream& in, const std::string& source_name) {
  std::string raw;
  std::size_t line_no = 0;
  std::optional<double> dt;
  std::int64_t start = 0;
  bool header_done = false;
  std::vector<Complex> samples;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!dt) {
      dt = parse_keyed(line, "dt");
      if (!dt) throw ParseError(source_name, line_no, "expected header 'dt=<seconds>'");
      if (!(*dt > 0.0) || !std::isfinite(*dt)) throw ParseError(source_name, line_no, "dt must be positive");
      continue;
    }
    if (!header_done && line.substr(0, 2) == "t0") {
      const auto t0 = parse_keyed(line, "t0");
      if (!t0 || !std::isfinite(*t0)) throw ParseError(source_name, line_no, "malformed 't0=<seconds>' header");
      const double ratio = *t0 / *dt;
      if (std::abs(ratio - std::round(ratio)) > 1e-6) {
        throw ParseError(source_name, line_no, "t0 is not a multiple of dt");
      }
      start = static_cast<std::int64_t>(std::llround(ratio));
      header_done = true;
      continue;
    }
    header_done = true;

    std::string_view value_text = line;
    if (const auto comma = line.find(','); comma != std::string_view::npos) {
      const auto t = parse_number(line.substr(0, comma));
      if (!t) throw ParseError(source_name, line_no, "malformed time value '" + std::string(line.substr(0, comma)) + "'");
      const double expected = static_cast<double>(start + static_cast<std::int64_t>(samples.size())) * *dt;
      if (std::abs(*t - expected) > 1e-6 * *dt) {
        throw ParseError(source_name, line_no, "non-uniform sample spacing: time " + format17(*t) +
                                                   " where " + format17(expected) + " was expected");
      }
      value_text = line.substr(comma + 1);
    }
    const auto value = parse_number(value_text);
    if (!value) throw ParseError(source_name, line_no, "malformed sample '" + std::string(value_text) + "'");
    if (!std::isfinite(*value)) throw ParseError(source_name, line_no, "non-finite sample");
    samples.emplace_back(*value, 0.0);
  }
  if (!dt) throw ParseError(source_name, line_no, "missing 'dt=' header");
  if (samples.empty()) throw ParseError(source_name, line_no, "no samples");
  return SampledSignal(std::move(samples), *dt, start);
}

SampledSignal load_cir(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CIR file " + path.string());
  return parse_cir(in, path.string());
}

void write_cir(std::ostream& out, const SampledSignal& cir, bool with_time) {
  out << "dt=" << format17(cir.sample_interval()) << '\n';
  out << "t0=" << format17(static_cast<double>(cir.start_offset()) * cir.sample_interval()) << '\n';
  for (std::size_t i = 0; i < cir.size(); ++i) {
    if (with_time) out << format17(cir.time_of(i)) << ',';
    out << format17(cir.samples()[i].real()) << '\n';
  }
}

void store_cir(const std::filesystem::path& path, const SampledSignal& cir, bool with_time) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write CIR file " + path.string());
  write_cir(out, cir, with_time);
  if (!out) throw ConfigError("failed writing CIR file " + path.string());
}

}  // namespace vlcrelay
