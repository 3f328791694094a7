#pragma once

#include <cstddef>

#include "vlcrelay/led.hpp"
#include "vlcrelay/relay.hpp"
#include "vlcrelay/room.hpp"

namespace vlcrelay {

// Which luminaire and photodetector of a room play each relay role.
struct RelayRoles {
  std::size_t source_tx = 0;
  std::size_t relay_tx = 1;
  std::size_t destination_rx = 0;
  std::size_t relay_rx = 1;
};

/// 5 x 5 x 3 m office: a ceiling luminaire (source) at the room centre, a desk
/// lamp relay whose photodetector looks up at the ceiling light and whose LED
/// points at a desk in the corner, and the destination photodetector on that
/// desk facing up.
RoomScenario default_office_room();

/// Synthesizes C_sd, C_sr, C_rd and C_rr for the given roles on a grid of
/// sample_interval and applies the LED response to all four.
RelayChannelSet synthesize_relay_channels(const RoomScenario& room, const RelayRoles& roles, double sample_interval,
                                          const LedModel& led = {}, double truncation_tolerance = 1e-9);

}  // namespace vlcrelay
