#include "vlcrelay/sinr.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {

void SinrScene::validate() const {
  if (sources.empty()) throw ConfigError("SINR scene has no sources");
  if (receivers.empty()) throw ConfigError("SINR scene has no receivers");
  for (const auto& s : sources) {
    if (s.h_los.size() != receivers.size() || s.h_nlos.size() != receivers.size()) {
      throw ConfigError("every source needs one LOS and one NLOS gain per receiver");
    }
    if (!(s.power_w >= 0.0)) throw ConfigError("source power must be non-negative");
    for (std::size_t j = 0; j < receivers.size(); ++j) {
      if (!(s.h_los[j] >= 0.0) || !(s.h_nlos[j] >= 0.0)) throw ConfigError("channel gains must be non-negative");
    }
  }
  if (!(responsivity > 0.0) || !(noise_psd >= 0.0) || !(bandwidth_hz > 0.0)) {
    throw ConfigError("responsivity and bandwidth must be positive and noise density non-negative");
  }
  if (pairs.empty()) throw ConfigError("SINR scene has no (source, receiver) pairs");
  for (const auto& [i, j] : pairs) {
    if (i >= sources.size() || j >= receivers.size()) throw ConfigError("SINR pair index out of range");
  }
}

double signal_power(const SinrScene& scene, std::size_t i, std::size_t j) {
  return scene.sources.at(i).h_los.at(j) * scene.sources[i].power_w;
}

double interference_power(const SinrScene& scene, std::size_t i, std::size_t j) {
  double isi = scene.sources.at(i).h_nlos.at(j) * scene.sources[i].power_w;
  double cci = 0.0;
  for (std::size_t k = 0; k < scene.sources.size(); ++k) {
    if (k == i) continue;
    const auto& s = scene.sources[k];
    cci += (s.h_los.at(j) + s.h_nlos.at(j)) * s.power_w;
  }
  return isi + cci;
}

double sinr_point(const SinrScene& scene, std::size_t i, std::size_t j) {
  const double r = scene.responsivity;
  const double sig = r * signal_power(scene, i, j);
  const double intf = r * interference_power(scene, i, j);
  const double num = sig * sig;
  const double den = scene.noise_psd * scene.bandwidth_hz + intf * intf;
  if (num == 0.0) return -std::numeric_limits<double>::infinity();
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(num / den);
}

double average_sinr(const SinrScene& scene) {
  scene.validate();
  double sum = 0.0;
  for (const auto& [i, j] : scene.pairs) sum += sinr_point(scene, i, j);
  return sum / static_cast<double>(scene.pairs.size());
}

std::pair<double, double> average_powers(const SinrScene& scene) {
  scene.validate();
  double sig = 0.0;
  double intf = 0.0;
  for (const auto& [i, j] : scene.pairs) {
    sig += signal_power(scene, i, j);
    intf += interference_power(scene, i, j);
  }
  const auto n = static_cast<double>(scene.pairs.size());
  return {sig / n, intf / n};
}

std::size_t best_serving_source(const SinrScene& scene, std::size_t j) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scene.sources.size(); ++i) {
    if (signal_power(scene, i, j) > signal_power(scene, best, j)) best = i;
  }
  return best;
}

std::vector<std::pair<std::size_t, std::size_t>> best_serving_pairs(const SinrScene& scene) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(scene.receivers.size());
  for (std::size_t j = 0; j < scene.receivers.size(); ++j) out.emplace_back(best_serving_source(scene, j), j);
  return out;
}

SinrScene sinr_scene_from_room(const RoomScenario& room, double power_w, double responsivity, double noise_psd,
                               double bandwidth_hz) {
  room.validate();
  SinrScene scene;
  scene.responsivity = responsivity;
  scene.noise_psd = noise_psd;
  scene.bandwidth_hz = bandwidth_hz;
  for (const auto& rx : room.receivers) scene.receivers.push_back(rx.position);
  const double diffuse = diffuse_gain(room);
  for (std::size_t i = 0; i < room.luminaires.size(); ++i) {
    SinrSource s{room.luminaires[i].position, power_w, {}, {}};
    for (std::size_t j = 0; j < room.receivers.size(); ++j) {
      s.h_los.push_back(los_gain(room, i, j));
      s.h_nlos.push_back(diffuse);
    }
    scene.sources.push_back(std::move(s));
  }
  scene.pairs = best_serving_pairs(scene);
  scene.validate();
  return scene;
}

}  // namespace vlcrelay
