#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "config.hpp"
#include "vlcrelay/relay_link.hpp"

namespace vlcsim {

// Channels of the configured scenario bound to its OFDM setup.
vlcrelay::RelayLink build_link(const RunConfig& config);

// Each command writes a '#' config echo followed by one CSV table.

/// power_dbm,snr_db,mode,scheme,allocation,kp,ber_analytic,ber_mc,mc_ci_lo,mc_ci_hi,bits
/// Rows run over power, then mode, scheme and allocation in configured order.
/// Monte Carlo columns stay empty when bits = 0 or the scheme has no mapper.
void cmd_ber_sweep(const RunConfig& config, std::ostream& out);

/// power_dbm,kp_opt,ber_at_opt for the [optimize] mode and scheme.
void cmd_optimize_kp(const RunConfig& config, std::ostream& out);

/// x,y,sinr_db per test point and a closing "average" row; with
/// ber_vs_sinr, sinr_db,scheme,ber rows instead.
void cmd_sinr_map(const RunConfig& config, std::ostream& out, bool ber_vs_sinr);

/// name,value scalar summaries of the effective CIRs, the loop gain and G_A.
/// When cir_stem is non-empty each effective CIR is also written to
/// <cir_stem>_<link>.cir as time,amplitude rows.
void cmd_channel_info(const RunConfig& config, std::ostream& out, const std::filesystem::path& cir_stem);

}  // namespace vlcsim
