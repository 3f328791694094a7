#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "vlcrelay/errors.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::uint64_t> bits;
  std::vector<std::string> modes;
  std::vector<std::string> schemes;
  std::vector<std::string> allocation;
  std::optional<double> kp_grid_step;
  std::string kp_table;
  bool ber_vs_sinr = false;
};

vlcsim::RunConfig resolve(const Overrides& o, const std::string& command) {
  vlcsim::RunConfig config = o.config_path.empty() ? vlcsim::RunConfig{} : vlcsim::load_run_config(o.config_path);
  if (o.seed) config.seed = *o.seed;
  if (o.bits) config.bits = *o.bits;
  if (o.kp_grid_step) config.kp_grid.step = *o.kp_grid_step;
  if (!o.kp_table.empty()) config.kp_table = o.kp_table;
  if (!o.schemes.empty()) {
    config.schemes = o.schemes;
    if (command == "optimize-kp") {
      if (o.schemes.size() != 1) throw vlcrelay::ConfigError("optimize-kp takes a single scheme");
      config.optimize_scheme = o.schemes.front();
    }
  }
  if (!o.modes.empty()) {
    config.modes.clear();
    for (const auto& m : o.modes) config.modes.push_back(vlcrelay::relay_mode_from_name(m));
    if (command == "optimize-kp") {
      if (o.modes.size() != 1) throw vlcrelay::ConfigError("optimize-kp takes a single mode");
      config.optimize_mode = config.modes.front();
    }
  }
  if (!o.allocation.empty()) {
    config.allocations.clear();
    for (const auto& a : o.allocation) config.allocations.push_back(vlcsim::allocation_from_name(a));
  }
  config.validate();
  return config;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw std::runtime_error("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file " + path);
  file << text;
  file.close();
  if (!file) throw std::runtime_error("failed writing output file " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relay-assisted indoor VLC link simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config_path, "Run configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--out", o.out, "Output CSV path (default: standard output)");
  app.add_option("--bits", o.bits, "Monte Carlo bits per grid point (0: analytic only)");
  app.add_option("--modes", o.modes, "Relay modes: direct, HD, FD")->delimiter(',');
  app.add_option("--schemes", o.schemes, "Modulation schemes, e.g. 2-PSK,4-QAM,BPSK-SIM")->delimiter(',');
  app.add_option("--allocation", o.allocation, "Power allocations: EPA, OPA")->delimiter(',');
  app.add_option("--kp-grid-step", o.kp_grid_step, "K_p search step in (0, 0.1]");
  app.add_option("--kp-table", o.kp_table, "CSV of power_dbm,kp used for OPA instead of searching")
      ->check(CLI::ExistingFile);
  app.add_flag("--ber-vs-sinr", o.ber_vs_sinr, "sinr-map: emit BER against SINR instead of the map");

  auto* ber = app.add_subcommand("ber-sweep", "BER against power for every mode, scheme and allocation");
  auto* opt = app.add_subcommand("optimize-kp", "Optimum source power share per power point");
  auto* sinr = app.add_subcommand("sinr-map", "SINR over a grid of test points");
  auto* info = app.add_subcommand("channel-info", "Effective CIRs, loop gain and relay gain");

  CLI11_PARSE(app, argc, argv);

  try {
    std::ostringstream text;
    if (ber->parsed()) {
      vlcsim::cmd_ber_sweep(resolve(o, "ber-sweep"), text);
    } else if (opt->parsed()) {
      vlcsim::cmd_optimize_kp(resolve(o, "optimize-kp"), text);
    } else if (sinr->parsed()) {
      vlcsim::cmd_sinr_map(resolve(o, "sinr-map"), text, o.ber_vs_sinr);
    } else if (info->parsed()) {
      std::filesystem::path stem;
      if (!o.out.empty() && o.out != "-") stem = std::filesystem::path(o.out).replace_extension();
      vlcsim::cmd_channel_info(resolve(o, "channel-info"), text, stem);
    }
    emit(text.str(), o.out);
  } catch (const std::exception& e) {
    std::cerr << "vlcsim: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
