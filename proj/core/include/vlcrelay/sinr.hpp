#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "vlcrelay/room.hpp"

namespace vlcrelay {

struct SinrSource {
  Vec3 position;
  double power_w = 1.0;       // transmitted optical power P_Ti
  std::vector<double> h_los;  // per receiver
  std::vector<double> h_nlos;
};

/// Luminaires, test points and the (source, receiver) pairs that enter the
/// averages.
struct SinrScene {
  std::vector<SinrSource> sources;
  std::vector<Vec3> receivers;
  double responsivity = 0.28;
  double noise_psd = 1e-20;  // eta
  double bandwidth_hz = 4e6;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  void validate() const;
};

/// 10 log10((r P_sig)^2 / (eta B + (r P_intf)^2)) with
///   P_sig  = H_LOS[i][j] P_i
///   P_intf = H_NLOS[i][j] P_i + sum_{k != i} (H_LOS[k][j] + H_NLOS[k][j]) P_k
/// +inf when the denominator is zero, -inf when the signal is zero.
double sinr_point(const SinrScene& scene, std::size_t i, std::size_t j);

double signal_power(const SinrScene& scene, std::size_t i, std::size_t j);
double interference_power(const SinrScene& scene, std::size_t i, std::size_t j);

// Mean of sinr_point in dB over scene.pairs.
double average_sinr(const SinrScene& scene);
// Linear means of P_sig and P_intf over scene.pairs.
std::pair<double, double> average_powers(const SinrScene& scene);

// Source with the largest signal power at receiver j (lowest index on ties).
std::size_t best_serving_source(const SinrScene& scene, std::size_t j);
// One pair per receiver, served by its best source.
std::vector<std::pair<std::size_t, std::size_t>> best_serving_pairs(const SinrScene& scene);

/// Scene whose gains come from the Lambertian line-of-sight model and the
/// diffuse gain of the room; every luminaire emits power_w and pairs are
/// best-serving.
SinrScene sinr_scene_from_room(const RoomScenario& room, double power_w, double responsivity, double noise_psd,
                               double bandwidth_hz);

}  // namespace vlcrelay
