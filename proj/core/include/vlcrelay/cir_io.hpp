#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "vlcrelay/signal.hpp"

namespace vlcrelay {

// CIR text format:
//   dt=<seconds>
//   t0=<seconds>          (optional; must be a multiple of dt)
//   <sample>              one real value per line
// A row may also be "<time>,<sample>"; times must then follow t0 + i * dt.
// Blank lines and lines starting with '#' are skipped. LF or CRLF.

SampledSignal parse_cir(std::istream& in, const std::string& source_name = "<stream>");
SampledSignal load_cir(const std::filesystem::path& path);

// Writes dt, t0 and the real part of every sample with 17 significant digits,
// optionally preceded by the sample time.
void write_cir(std::ostream& out, const SampledSignal& cir, bool with_time = false);
void store_cir(const std::filesystem::path& path, const SampledSignal& cir, bool with_time = false);

}  // namespace vlcrelay
