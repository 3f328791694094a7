#include "vlcrelay/scenario.hpp"

namespace vlcrelay {

RoomScenario default_office_room() {
  RoomScenario room;
  room.dimensions = {5.0, 5.0, 3.0};
  const Vec3 ceiling{2.5, 2.5, 3.0};
  const Vec3 destination{4.3, 4.3, 0.8};
  const Vec3 relay_pd{3.0, 3.0, 1.4};
  const Vec3 relay_led{3.2, 3.2, 1.3};
  room.luminaires = {{ceiling, {0.0, 0.0, -1.0}}, {relay_led, destination - relay_led}};
  room.receivers = {{destination, {0.0, 0.0, 1.0}}, {relay_pd, ceiling - relay_pd}};
  return room;
}

RelayChannelSet synthesize_relay_channels(const RoomScenario& room, const RelayRoles& roles, double sample_interval,
                                          const LedModel& led, double truncation_tolerance) {
  const SampledSignal c_sd = synthesize_cir(room, roles.source_tx, roles.destination_rx, sample_interval);
  const SampledSignal c_sr = synthesize_cir(room, roles.source_tx, roles.relay_rx, sample_interval);
  const SampledSignal c_rd = synthesize_cir(room, roles.relay_tx, roles.destination_rx, sample_interval);
  const SampledSignal c_rr = synthesize_cir(room, roles.relay_tx, roles.relay_rx, sample_interval);
  return make_relay_channels(c_sd, c_sr, c_rd, c_rr, led, "synthetic", truncation_tolerance);
}

}  // namespace vlcrelay
