#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vlcrelay/analysis.hpp"
#include "vlcrelay/led.hpp"
#include "vlcrelay/ofdm.hpp"
#include "vlcrelay/relay_link.hpp"
#include "vlcrelay/room.hpp"
#include "vlcrelay/scenario.hpp"

namespace vlcsim {

enum class Allocation { epa, opa };
std::string to_string(Allocation a);
Allocation allocation_from_name(const std::string& name);

/// Every parameter of a run. Defaults reproduce the office setup: N = 256,
/// N_cp = 32, T_s = 250 ns, r = 0.28 A/W, T_p = 50 ns, roll-off 0.5 and
/// N_o = 1e-20 W/Hz.
struct RunConfig {
  // [scenario]
  std::string scenario_source = "synthetic";  // synthetic | file
  std::array<std::string, 4> cir_files;       // raw sd, sr, rd, rr
  vlcrelay::RoomScenario room = vlcrelay::default_office_room();
  vlcrelay::RelayRoles roles;
  vlcrelay::LedModel led;
  vlcrelay::RelayOptions relay;
  vlcrelay::AnalysisOptions analysis;

  vlcrelay::OfdmConfig ofdm;    // [ofdm]
  vlcrelay::LinkBudget budget;  // [budget]; p_total_w and k_p come from the sweep

  // [sweep]
  std::vector<double> power_dbm;
  std::vector<std::string> schemes{"2-PSK", "4-QAM", "BPSK-SIM"};
  std::vector<vlcrelay::RelayMode> modes{vlcrelay::RelayMode::direct, vlcrelay::RelayMode::half_duplex,
                                         vlcrelay::RelayMode::full_duplex};
  std::vector<Allocation> allocations{Allocation::epa, Allocation::opa};
  vlcrelay::KpGrid kp_grid;
  std::string kp_table;  // optional CSV of power_dbm,kp
  std::uint64_t seed = 1;
  std::uint64_t bits = 0;  // Monte Carlo bits per point; 0 = analytic only

  // [optimize]
  vlcrelay::RelayMode optimize_mode = vlcrelay::RelayMode::full_duplex;
  std::string optimize_scheme = "BPSK-SIM";

  // [sinr]
  std::vector<vlcrelay::Pose> sinr_luminaires;
  int sinr_grid = 21;
  double sinr_height_m = 0.85;
  double sinr_power_w = 1.0;
  std::vector<double> ber_sinr_db;

  RunConfig();
  void validate() const;
  /// "key = value" lines of every resolved parameter, grouped by section.
  std::vector<std::string> echo() const;
};

/// Applies an INI-style document ("[section]" headers, "key = value" lines,
/// '#' or ';' comments) on top of the defaults. Unknown sections or keys and
/// malformed values raise ParseError with the line number.
void apply_config(std::istream& in, const std::string& source_name, RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

// "a:step:b" (inclusive) or a comma-separated list.
std::vector<double> parse_number_list(const std::string& text);
std::vector<std::string> split_list(const std::string& text);
// Reads "power_dbm,kp" rows; '#' comments and a non-numeric header are skipped.
std::map<double, double> load_kp_table(const std::filesystem::path& path);

std::string format_number(double v);

}  // namespace vlcsim
