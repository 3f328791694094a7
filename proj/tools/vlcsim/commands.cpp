#include "commands.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "vlcrelay/analysis.hpp"
#include "vlcrelay/cir_io.hpp"
#include "vlcrelay/errors.hpp"
#include "vlcrelay/modulation.hpp"
#include "vlcrelay/monte_carlo.hpp"
#include "vlcrelay/scenario.hpp"
#include "vlcrelay/sinr.hpp"

namespace vlcsim {

using namespace vlcrelay;

namespace {

void write_echo(std::ostream& out, const std::string& command, const RunConfig& config) {
  out << "# vlcsim " << command << '\n';
  for (const auto& line : config.echo()) out << "# " << line << '\n';
}

LinkBudget budget_at(const RunConfig& config, double power_dbm, double k_p) {
  return config.budget.with_power(LinkBudget::dbm_to_watts(power_dbm), k_p);
}

double mean_snr_db(const SnrProfile& profile) {
  double sum = 0.0;
  for (double v : profile.per_bin) sum += v;
  return 10.0 * std::log10(sum / static_cast<double>(profile.per_bin.size()));
}

class KpResolver {
 public:
  explicit KpResolver(const RunConfig& config) : config_(config) {
    if (!config.kp_table.empty()) table_ = load_kp_table(config.kp_table);
  }

  double opa(const LinkModel& model, RelayMode mode, const ModulationScheme& scheme, double power_dbm) const {
    if (table_) {
      for (const auto& [p, k] : *table_) {
        if (std::abs(p - power_dbm) < 1e-9) return k;
      }
      throw ConfigError("K_p table has no entry for " + format_number(power_dbm) + " dBm");
    }
    return optimize_kp(model, mode, scheme, budget_at(config_, power_dbm, 0.5), config_.kp_grid).k_p;
  }

 private:
  const RunConfig& config_;
  std::optional<std::map<double, double>> table_;
};

struct SweepRow {
  double power_dbm = 0.0;
  RelayMode mode = RelayMode::direct;
  std::string scheme;
  Allocation allocation = Allocation::epa;
  double kp = 0.5;
  double snr_db = 0.0;
  double ber = 0.0;
  std::optional<McReport> mc;
};

}  // namespace

RelayLink build_link(const RunConfig& config) {
  config.validate();
  const double dt = config.ofdm.sample_interval();
  RelayChannelSet channels = [&] {
    if (config.scenario_source == "file") {
      const SampledSignal c_rr =
          config.cir_files[3].empty() ? SampledSignal::zeros(1, dt) : load_cir(config.cir_files[3]);
      return make_relay_channels(load_cir(config.cir_files[0]), load_cir(config.cir_files[1]),
                                 load_cir(config.cir_files[2]), c_rr, config.led, "file");
    }
    return synthesize_relay_channels(config.room, config.roles, dt, config.led);
  }();
  return RelayLink(std::move(channels), config.ofdm, config.led, config.relay);
}

void cmd_ber_sweep(const RunConfig& config, std::ostream& out) {
  const LinkModel model(build_link(config), config.analysis);
  const KpResolver resolver(config);

  std::vector<SweepRow> rows;
  for (double p : config.power_dbm) {
    for (RelayMode mode : config.modes) {
      for (const auto& name : config.schemes) {
        const ModulationScheme scheme = ModulationScheme::from_name(name);
        for (Allocation a : config.allocations) {
          SweepRow row{p, mode, scheme.name(), a};
          // The direct link gives the whole budget to the source.
          double k = 0.5;
          if (mode != RelayMode::direct && a == Allocation::opa) k = resolver.opa(model, mode, scheme, p);
          row.kp = mode == RelayMode::direct ? 1.0 : k;
          const LinkBudget b = budget_at(config, p, k);
          const SnrProfile profile = model.snr_profile(mode, b);
          row.snr_db = mean_snr_db(profile);
          row.ber = average_ber(profile, scheme, config.ofdm.n_subcarriers, config.analysis.bpsk_sim_sqrt);
          rows.push_back(std::move(row));
        }
      }
    }
  }

  if (config.bits > 0) {
    std::uint64_t combo = 0;
    for (RelayMode mode : config.modes) {
      for (const auto& name : config.schemes) {
        ++combo;
        const ModulationScheme scheme = ModulationScheme::from_name(name);
        if (!scheme.has_mapper()) continue;
        std::vector<McPoint> points;
        std::vector<SweepRow*> targets;
        for (auto& row : rows) {
          if (row.mode != mode || row.scheme != scheme.name()) continue;
          points.push_back({row.power_dbm, mode == RelayMode::direct ? 0.5 : row.kp, std::nullopt});
          targets.push_back(&row);
        }
        const McSettings settings{config.bits, config.seed + 0x9e3779b97f4a7c15ULL * combo, 0};
        const auto reports = run_monte_carlo(model.link(), scheme, mode, config.budget, points, settings);
        for (std::size_t i = 0; i < reports.size(); ++i) targets[i]->mc = reports[i];
      }
    }
  }

  write_echo(out, "ber-sweep", config);
  out << "power_dbm,snr_db,mode,scheme,allocation,kp,ber_analytic,ber_mc,mc_ci_lo,mc_ci_hi,bits\n";
  for (const auto& row : rows) {
    out << format_number(row.power_dbm) << ',' << format_number(row.snr_db) << ',' << to_string(row.mode) << ','
        << row.scheme << ',' << to_string(row.allocation) << ',' << format_number(row.kp) << ','
        << format_number(row.ber) << ',';
    if (row.mc) {
      out << format_number(row.mc->ber) << ',' << format_number(row.mc->ci_lo) << ','
          << format_number(row.mc->ci_hi) << ',' << row.mc->bits_sent << '\n';
    } else {
      out << ",,,0\n";
    }
  }
}

void cmd_optimize_kp(const RunConfig& config, std::ostream& out) {
  if (config.optimize_mode == RelayMode::direct) {
    throw ConfigError("optimize-kp needs a relaying mode (HD or FD)");
  }
  const LinkModel model(build_link(config), config.analysis);
  const ModulationScheme scheme = ModulationScheme::from_name(config.optimize_scheme);
  std::vector<KpOptimum> results;
  for (double p : config.power_dbm) {
    results.push_back(optimize_kp(model, config.optimize_mode, scheme, budget_at(config, p, 0.5), config.kp_grid));
  }
  write_echo(out, "optimize-kp", config);
  out << "power_dbm,kp_opt,ber_at_opt\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out << format_number(config.power_dbm[i]) << ',' << format_number(results[i].k_p) << ','
        << format_number(results[i].ber) << '\n';
  }
}

void cmd_sinr_map(const RunConfig& config, std::ostream& out, bool ber_vs_sinr) {
  config.validate();
  if (ber_vs_sinr) {
    std::vector<ModulationScheme> schemes;
    for (const auto& s : config.schemes) schemes.push_back(ModulationScheme::from_name(s));
    write_echo(out, "sinr-map --ber-vs-sinr", config);
    out << "sinr_db,scheme,ber\n";
    for (double db : config.ber_sinr_db) {
      for (const auto& s : schemes) {
        const double ber = ber_per_subcarrier(std::pow(10.0, db / 10.0), s, config.analysis.bpsk_sim_sqrt);
        out << format_number(db) << ',' << s.name() << ',' << format_number(ber) << '\n';
      }
    }
    return;
  }

  RoomScenario room = config.room;
  room.luminaires = config.sinr_luminaires;
  room.receivers.clear();
  const int n = config.sinr_grid;
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      const double x = room.dimensions.x * (ix + 0.5) / n;
      const double y = room.dimensions.y * (iy + 0.5) / n;
      room.receivers.push_back({{x, y, config.sinr_height_m}, {0.0, 0.0, 1.0}});
    }
  }
  const SinrScene scene = sinr_scene_from_room(room, config.sinr_power_w, config.budget.responsivity,
                                               config.budget.noise_psd, config.budget.noise_bandwidth_hz);
  const auto [p_sig, p_intf] = average_powers(scene);

  write_echo(out, "sinr-map", config);
  out << "# average_p_sig_w = " << format_number(p_sig) << '\n';
  out << "# average_p_intf_w = " << format_number(p_intf) << '\n';
  out << "x,y,sinr_db\n";
  for (const auto& [i, j] : scene.pairs) {
    const Vec3 pos = scene.receivers[j];
    out << format_number(pos.x) << ',' << format_number(pos.y) << ',' << format_number(sinr_point(scene, i, j))
        << '\n';
  }
  out << "average,," << format_number(average_sinr(scene)) << '\n';
}

void cmd_channel_info(const RunConfig& config, std::ostream& out, const std::filesystem::path& cir_stem) {
  const RelayLink link = build_link(config);
  const auto& ch = link.channels();
  const std::pair<const char*, const SampledSignal*> links[] = {
      {"c_sd_eff", &ch.c_sd_eff}, {"c_sr_eff", &ch.c_sr_eff}, {"c_rd_eff", &ch.c_rd_eff}, {"c_rr_eff", &ch.c_rr_eff}};
  const LinkBudget b = budget_at(config, config.power_dbm.front(), 0.5);

  write_echo(out, "channel-info", config);
  out << "name,value\n";
  for (const auto& [name, cir] : links) {
    const std::string n(name);
    out << n << ".energy," << format_number(cir->energy()) << '\n';
    out << n << ".dc_gain," << format_number(cir->integral().real()) << '\n';
    out << n << ".peak_delay_s," << format_number(static_cast<double>(cir->peak_index()) * cir->sample_interval())
        << '\n';
    out << n << ".samples," << cir->size() << '\n';
  }
  out << "loop_gain_rho," << format_number(loop_gain(ch, b)) << '\n';
  out << "g_a_power_dbm," << format_number(config.power_dbm.front()) << '\n';
  out << "g_a_k_p," << format_number(b.k_p) << '\n';
  out << "g_a," << format_number(link.g_a(b)) << '\n';

  if (!cir_stem.empty()) {
    for (const auto& [name, cir] : links) {
      store_cir(cir_stem.string() + "_" + name + ".cir", *cir, true);
    }
  }
}

}  // namespace vlcsim
