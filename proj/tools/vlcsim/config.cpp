#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "vlcrelay/errors.hpp"
#include "vlcrelay/modulation.hpp"

namespace vlcsim {

using vlcrelay::ConfigError;
using vlcrelay::ParseError;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text) {
  const std::string t = trim(text);
  const char* first = t.data();
  if (!t.empty() && t.front() == '+') ++first;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("'" + t + "' is not a finite number");
  }
  return v;
}

template <typename Int>
Int parse_integer(const std::string& text) {
  const std::string t = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ConfigError("'" + t + "' is not an integer");
  }
  return v;
}

bool parse_bool(const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("'" + t + "' is not a boolean");
}

std::vector<double> parse_numbers(std::string text) {
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string token;
  while (in >> token) out.push_back(parse_double(token));
  return out;
}

vlcrelay::Vec3 parse_vec3(const std::string& text) {
  const auto v = parse_numbers(text);
  if (v.size() != 3) throw ConfigError("expected three coordinates, got '" + trim(text) + "'");
  return {v[0], v[1], v[2]};
}

// "x y z nx ny nz; x y z nx ny nz; ..."
std::vector<vlcrelay::Pose> parse_poses(const std::string& text) {
  std::vector<vlcrelay::Pose> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (trim(item).empty()) continue;
    const auto v = parse_numbers(item);
    if (v.size() != 6) throw ConfigError("a pose needs 'x y z nx ny nz', got '" + trim(item) + "'");
    out.push_back({{v[0], v[1], v[2]}, {v[3], v[4], v[5]}});
  }
  if (out.empty()) throw ConfigError("pose list is empty");
  return out;
}

std::string format_vec3(vlcrelay::Vec3 v) {
  return format_number(v.x) + " " + format_number(v.y) + " " + format_number(v.z);
}

std::string format_poses(const std::vector<vlcrelay::Pose>& poses) {
  std::string out;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (i > 0) out += "; ";
    out += format_vec3(poses[i].position) + " " + format_vec3(poses[i].normal);
  }
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += fmt(items[i]);
  }
  return out;
}

std::vector<vlcrelay::Pose> default_sinr_luminaires() {
  std::vector<vlcrelay::Pose> out;
  for (double x : {1.25, 3.75}) {
    for (double y : {1.25, 3.75}) out.push_back({{x, y, 3.0}, {0.0, 0.0, -1.0}});
  }
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.source",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t != "synthetic" && t != "file") throw ConfigError("scenario source must be 'synthetic' or 'file'");
         c.scenario_source = t;
       }},
      {"scenario.cir_sd", [](RunConfig& c, const std::string& v) { c.cir_files[0] = trim(v); }},
      {"scenario.cir_sr", [](RunConfig& c, const std::string& v) { c.cir_files[1] = trim(v); }},
      {"scenario.cir_rd", [](RunConfig& c, const std::string& v) { c.cir_files[2] = trim(v); }},
      {"scenario.cir_rr", [](RunConfig& c, const std::string& v) { c.cir_files[3] = trim(v); }},
      {"scenario.room", [](RunConfig& c, const std::string& v) { c.room.dimensions = parse_vec3(v); }},
      {"scenario.luminaires", [](RunConfig& c, const std::string& v) { c.room.luminaires = parse_poses(v); }},
      {"scenario.receivers", [](RunConfig& c, const std::string& v) { c.room.receivers = parse_poses(v); }},
      {"scenario.half_angle_deg", [](RunConfig& c, const std::string& v) { c.room.half_angle_deg = parse_double(v); }},
      {"scenario.pd_area_m2", [](RunConfig& c, const std::string& v) { c.room.pd_area_m2 = parse_double(v); }},
      {"scenario.fov_deg", [](RunConfig& c, const std::string& v) { c.room.fov_deg = parse_double(v); }},
      {"scenario.reflectivity", [](RunConfig& c, const std::string& v) { c.room.reflectivity = parse_double(v); }},
      {"scenario.source_tx", [](RunConfig& c, const std::string& v) { c.roles.source_tx = parse_integer<std::size_t>(v); }},
      {"scenario.relay_tx", [](RunConfig& c, const std::string& v) { c.roles.relay_tx = parse_integer<std::size_t>(v); }},
      {"scenario.destination_rx",
       [](RunConfig& c, const std::string& v) { c.roles.destination_rx = parse_integer<std::size_t>(v); }},
      {"scenario.relay_rx", [](RunConfig& c, const std::string& v) { c.roles.relay_rx = parse_integer<std::size_t>(v); }},
      {"scenario.led_cutoff_hz", [](RunConfig& c, const std::string& v) { c.led.cutoff_hz = parse_double(v); }},
      {"scenario.rd_channel",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "effective") c.relay.rd = vlcrelay::RelayToDestination::effective;
         else if (t == "raw") c.relay.rd = vlcrelay::RelayToDestination::raw;
         else throw ConfigError("rd_channel must be 'effective' or 'raw'");
       }},
      {"scenario.ga_numerator",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "total") c.relay.ga_numerator = vlcrelay::GaNumerator::total;
         else if (t == "source") c.relay.ga_numerator = vlcrelay::GaNumerator::source;
         else throw ConfigError("ga_numerator must be 'total' or 'source'");
       }},
      {"scenario.residual_tolerance",
       [](RunConfig& c, const std::string& v) { c.relay.residual_tolerance = parse_double(v); }},
      {"scenario.fd_noise_gain",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "consistent") c.analysis.fd_noise_gain = vlcrelay::FdNoiseGain::consistent;
         else if (t == "verbatim") c.analysis.fd_noise_gain = vlcrelay::FdNoiseGain::verbatim;
         else throw ConfigError("fd_noise_gain must be 'consistent' or 'verbatim'");
       }},
      {"scenario.bpsk_sim_sqrt", [](RunConfig& c, const std::string& v) { c.analysis.bpsk_sim_sqrt = parse_bool(v); }},

      {"ofdm.n_subcarriers", [](RunConfig& c, const std::string& v) { c.ofdm.n_subcarriers = parse_integer<int>(v); }},
      {"ofdm.cp_length", [](RunConfig& c, const std::string& v) { c.ofdm.cp_length = parse_integer<int>(v); }},
      {"ofdm.symbol_interval", [](RunConfig& c, const std::string& v) { c.ofdm.symbol_interval = parse_double(v); }},
      {"ofdm.samples_per_symbol",
       [](RunConfig& c, const std::string& v) { c.ofdm.samples_per_symbol = parse_integer<int>(v); }},
      {"ofdm.rrc_roll_off", [](RunConfig& c, const std::string& v) { c.ofdm.rrc_roll_off = parse_double(v); }},
      {"ofdm.rrc_span_symbols",
       [](RunConfig& c, const std::string& v) { c.ofdm.rrc_span_symbols = parse_integer<int>(v); }},
      {"ofdm.window_advance", [](RunConfig& c, const std::string& v) { c.ofdm.window_advance = parse_integer<int>(v); }},

      {"budget.responsivity", [](RunConfig& c, const std::string& v) { c.budget.responsivity = parse_double(v); }},
      {"budget.noise_psd", [](RunConfig& c, const std::string& v) { c.budget.noise_psd = parse_double(v); }},
      {"budget.t_p", [](RunConfig& c, const std::string& v) { c.budget.t_p = parse_double(v); }},
      {"budget.noise_bandwidth_hz",
       [](RunConfig& c, const std::string& v) { c.budget.noise_bandwidth_hz = parse_double(v); }},

      {"sweep.power_dbm", [](RunConfig& c, const std::string& v) { c.power_dbm = parse_number_list(v); }},
      {"sweep.schemes", [](RunConfig& c, const std::string& v) { c.schemes = split_list(v); }},
      {"sweep.modes",
       [](RunConfig& c, const std::string& v) {
         c.modes.clear();
         for (const auto& m : split_list(v)) c.modes.push_back(vlcrelay::relay_mode_from_name(m));
       }},
      {"sweep.allocation",
       [](RunConfig& c, const std::string& v) {
         c.allocations.clear();
         for (const auto& a : split_list(v)) c.allocations.push_back(allocation_from_name(a));
       }},
      {"sweep.kp_grid",
       [](RunConfig& c, const std::string& v) {
         const std::string t = trim(v);
         if (t == "table2") c.kp_grid = vlcrelay::KpGrid::table2();
         else if (t == "default") c.kp_grid = vlcrelay::KpGrid{};
         else throw ConfigError("kp_grid must be 'default' or 'table2'");
       }},
      {"sweep.kp_grid_step", [](RunConfig& c, const std::string& v) { c.kp_grid.step = parse_double(v); }},
      {"sweep.kp_lo", [](RunConfig& c, const std::string& v) { c.kp_grid.lo = parse_double(v); }},
      {"sweep.kp_hi", [](RunConfig& c, const std::string& v) { c.kp_grid.hi = parse_double(v); }},
      {"sweep.kp_table", [](RunConfig& c, const std::string& v) { c.kp_table = trim(v); }},
      {"sweep.seed", [](RunConfig& c, const std::string& v) { c.seed = parse_integer<std::uint64_t>(v); }},
      {"sweep.bits", [](RunConfig& c, const std::string& v) { c.bits = parse_integer<std::uint64_t>(v); }},

      {"optimize.mode", [](RunConfig& c, const std::string& v) { c.optimize_mode = vlcrelay::relay_mode_from_name(trim(v)); }},
      {"optimize.scheme", [](RunConfig& c, const std::string& v) { c.optimize_scheme = trim(v); }},

      {"sinr.luminaires", [](RunConfig& c, const std::string& v) { c.sinr_luminaires = parse_poses(v); }},
      {"sinr.grid", [](RunConfig& c, const std::string& v) { c.sinr_grid = parse_integer<int>(v); }},
      {"sinr.height_m", [](RunConfig& c, const std::string& v) { c.sinr_height_m = parse_double(v); }},
      {"sinr.power_w", [](RunConfig& c, const std::string& v) { c.sinr_power_w = parse_double(v); }},
      {"sinr.ber_sinr_db", [](RunConfig& c, const std::string& v) { c.ber_sinr_db = parse_number_list(v); }},
  };
  return table;
}

}  // namespace

std::string to_string(Allocation a) { return a == Allocation::epa ? "EPA" : "OPA"; }

Allocation allocation_from_name(const std::string& name) {
  const std::string t = trim(name);
  if (t == "EPA" || t == "epa") return Allocation::epa;
  if (t == "OPA" || t == "opa") return Allocation::opa;
  throw ConfigError("unknown allocation '" + t + "' (expected EPA or OPA)");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(t);
    std::string item;
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError("range must read 'start:step:stop', got '" + t + "'");
    const double a = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double b = parse_double(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("range needs a positive step and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("range has too many points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = a + static_cast<double>(i) * step;
    return out;
  }
  auto out = parse_numbers(t);
  if (out.empty()) throw ConfigError("number list is empty");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ConfigError("list is empty");
  return out;
}

std::map<double, double> load_kp_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open K_p table " + path.string());
  std::map<double, double> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(path.string(), line_no, "expected 'power_dbm,kp'");
    double p = 0.0;
    double k = 0.0;
    try {
      p = parse_double(line.substr(0, comma));
      k = parse_double(line.substr(comma + 1));
    } catch (const ConfigError& e) {
      if (table.empty() && line_no == 1) continue;  // header row
      throw ParseError(path.string(), line_no, e.what());
    }
    if (!(k > 0.0 && k < 1.0)) throw ParseError(path.string(), line_no, "K_p must lie in (0, 1)");
    table[p] = k;
  }
  if (table.empty()) throw ConfigError("K_p table " + path.string() + " has no rows");
  return table;
}

RunConfig::RunConfig()
    : power_dbm(parse_number_list("0:1:19")),
      sinr_luminaires(default_sinr_luminaires()),
      ber_sinr_db(parse_number_list("0:1:30")) {
  budget.noise_bandwidth_hz = 1.0 / ofdm.symbol_interval;
}

void RunConfig::validate() const {
  ofdm.validate();
  led.validate();
  vlcrelay::LinkBudget b = budget;
  b.validate();
  kp_grid.validate();
  if (scenario_source == "synthetic") {
    room.validate();
  } else {
    for (std::size_t i = 0; i < 3; ++i) {
      if (cir_files[i].empty()) throw ConfigError("file scenarios need cir_sd, cir_sr and cir_rd");
    }
  }
  if (power_dbm.empty() || schemes.empty() || modes.empty() || allocations.empty()) {
    throw ConfigError("the sweep needs at least one power, scheme, mode and allocation");
  }
  for (const auto& s : schemes) (void)vlcrelay::ModulationScheme::from_name(s);
  (void)vlcrelay::ModulationScheme::from_name(optimize_scheme);
  if (bits != 0 && bits < 10000) throw ConfigError("Monte Carlo needs at least 10^4 bits per point");
  if (sinr_grid < 1) throw ConfigError("SINR grid needs at least one point per axis");
  if (!(sinr_power_w > 0.0)) throw ConfigError("SINR source power must be positive");
}

std::vector<std::string> RunConfig::echo() const {
  using vlcrelay::to_string;
  const auto num = [](double v) { return format_number(v); };
  const auto str = [](const std::string& s) { return s; };
  std::vector<std::string> out;
  auto add = [&out](const std::string& key, const std::string& value) { out.push_back(key + " = " + value); };

  out.push_back("[scenario]");
  add("source", scenario_source);
  add("cir_sd", cir_files[0]);
  add("cir_sr", cir_files[1]);
  add("cir_rd", cir_files[2]);
  add("cir_rr", cir_files[3]);
  add("room", format_vec3(room.dimensions));
  add("luminaires", format_poses(room.luminaires));
  add("receivers", format_poses(room.receivers));
  add("half_angle_deg", num(room.half_angle_deg));
  add("pd_area_m2", num(room.pd_area_m2));
  add("fov_deg", num(room.fov_deg));
  add("reflectivity", num(room.reflectivity));
  add("source_tx", std::to_string(roles.source_tx));
  add("relay_tx", std::to_string(roles.relay_tx));
  add("destination_rx", std::to_string(roles.destination_rx));
  add("relay_rx", std::to_string(roles.relay_rx));
  add("led_cutoff_hz", num(led.cutoff_hz));
  add("rd_channel", relay.rd == vlcrelay::RelayToDestination::effective ? "effective" : "raw");
  add("ga_numerator", relay.ga_numerator == vlcrelay::GaNumerator::total ? "total" : "source");
  add("residual_tolerance", num(relay.residual_tolerance));
  add("fd_noise_gain", analysis.fd_noise_gain == vlcrelay::FdNoiseGain::consistent ? "consistent" : "verbatim");
  add("bpsk_sim_sqrt", analysis.bpsk_sim_sqrt ? "true" : "false");

  out.push_back("[ofdm]");
  add("n_subcarriers", std::to_string(ofdm.n_subcarriers));
  add("cp_length", std::to_string(ofdm.cp_length));
  add("symbol_interval", num(ofdm.symbol_interval));
  add("samples_per_symbol", std::to_string(ofdm.samples_per_symbol));
  add("rrc_roll_off", num(ofdm.rrc_roll_off));
  add("rrc_span_symbols", std::to_string(ofdm.rrc_span_symbols));
  add("window_advance", std::to_string(ofdm.window_advance));

  out.push_back("[budget]");
  add("responsivity", num(budget.responsivity));
  add("noise_psd", num(budget.noise_psd));
  add("t_p", num(budget.t_p));
  add("noise_bandwidth_hz", num(budget.noise_bandwidth_hz));

  out.push_back("[sweep]");
  add("power_dbm", join(power_dbm, num));
  add("schemes", join(schemes, str));
  add("modes", join(modes, [](vlcrelay::RelayMode m) { return to_string(m); }));
  add("allocation", join(allocations, [](Allocation a) { return vlcsim::to_string(a); }));
  add("kp_lo", num(kp_grid.lo));
  add("kp_hi", num(kp_grid.hi));
  add("kp_grid_step", num(kp_grid.step));
  add("kp_table", kp_table);
  add("seed", std::to_string(seed));
  add("bits", std::to_string(bits));

  out.push_back("[optimize]");
  add("mode", to_string(optimize_mode));
  add("scheme", optimize_scheme);

  out.push_back("[sinr]");
  add("luminaires", format_poses(sinr_luminaires));
  add("grid", std::to_string(sinr_grid));
  add("height_m", num(sinr_height_m));
  add("power_w", num(sinr_power_w));
  add("ber_sinr_db", join(ber_sinr_db, num));
  return out;
}

void apply_config(std::istream& in, const std::string& source_name, RunConfig& config) {
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  bool bandwidth_set = false;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(source_name, line_no, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"scenario", "ofdm", "budget", "sweep", "optimize", "sinr"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known)) {
        throw ParseError(source_name, line_no, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source_name, line_no, "expected 'key = value'");
    if (section.empty()) throw ParseError(source_name, line_no, "key outside of a [section]");
    const std::string key = section + "." + trim(line.substr(0, eq));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ParseError(source_name, line_no, "unknown key '" + key + "'");
    try {
      it->second(config, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ParseError(source_name, line_no, e.what());
    }
    if (key == "budget.noise_bandwidth_hz") bandwidth_set = true;
  }
  if (!bandwidth_set) config.budget.noise_bandwidth_hz = 1.0 / config.ofdm.symbol_interval;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  RunConfig config;
  apply_config(in, path.string(), config);
  return config;
}

}  // namespace vlcsim
