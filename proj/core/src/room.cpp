#include "vlcrelay/room.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "vlcrelay/errors.hpp"

namespace vlcrelay {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

bool inside(Vec3 p, Vec3 dims) {
  constexpr double eps = 1e-9;
  return p.x >= -eps && p.y >= -eps && p.z >= -eps && p.x <= dims.x + eps && p.y <= dims.y + eps &&
         p.z <= dims.z + eps;
}

void check_pose(const Pose& pose, Vec3 dims, const char* what, std::size_t index) {
  if (!inside(pose.position, dims)) {
    throw ConfigError(std::string(what) + " " + std::to_string(index) + " lies outside the room");
  }
  if (norm(pose.normal) == 0.0) {
    throw ConfigError(std::string(what) + " " + std::to_string(index) + " has a zero orientation vector");
  }
}

void check_indices(const RoomScenario& scene, std::size_t tx, std::size_t rx) {
  if (tx >= scene.luminaires.size()) throw ConfigError("luminaire index " + std::to_string(tx) + " out of range");
  if (rx >= scene.receivers.size()) throw ConfigError("receiver index " + std::to_string(rx) + " out of range");
}

}  // namespace

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(Vec3 v) { return std::sqrt(dot(v, v)); }
Vec3 normalized(Vec3 v) { return (1.0 / norm(v)) * v; }

void RoomScenario::validate() const {
  if (!(dimensions.x > 0 && dimensions.y > 0 && dimensions.z > 0)) {
    throw ConfigError("room dimensions must be positive");
  }
  if (!(half_angle_deg > 0.0 && half_angle_deg < 90.0)) {
    throw ConfigError("LED half-angle must lie in (0, 90) degrees");
  }
  if (!(fov_deg > 0.0 && fov_deg <= 90.0)) throw ConfigError("field of view must lie in (0, 90] degrees");
  if (!(pd_area_m2 > 0.0)) throw ConfigError("photodetector area must be positive");
  if (!(reflectivity >= 0.0 && reflectivity < 1.0)) throw ConfigError("reflectivity must lie in [0, 1)");
  for (std::size_t i = 0; i < luminaires.size(); ++i) check_pose(luminaires[i], dimensions, "luminaire", i);
  for (std::size_t i = 0; i < receivers.size(); ++i) check_pose(receivers[i], dimensions, "receiver", i);
}

double lambertian_order(double half_angle_deg) {
  if (!(half_angle_deg > 0.0 && half_angle_deg < 90.0)) {
    throw ConfigError("LED half-angle must lie in (0, 90) degrees");
  }
  return -std::log(2.0) / std::log(std::cos(half_angle_deg * kDegToRad));
}

double los_gain(const RoomScenario& scene, std::size_t tx, std::size_t rx) {
  check_indices(scene, tx, rx);
  const Pose& t = scene.luminaires[tx];
  const Pose& r = scene.receivers[rx];
  const Vec3 d = r.position - t.position;
  const double dist = norm(d);
  if (dist == 0.0) return 0.0;
  const Vec3 u = (1.0 / dist) * d;
  const double cos_phi = dot(normalized(t.normal), u);
  const double cos_psi = -dot(normalized(r.normal), u);
  if (cos_phi <= 0.0 || cos_psi <= 0.0) return 0.0;
  if (cos_psi < std::cos(scene.fov_deg * kDegToRad)) return 0.0;
  const double m = lambertian_order(scene.half_angle_deg);
  return (m + 1.0) * scene.pd_area_m2 / (2.0 * std::numbers::pi * dist * dist) * std::pow(cos_phi, m) * cos_psi;
}

double path_delay(const RoomScenario& scene, std::size_t tx, std::size_t rx) {
  check_indices(scene, tx, rx);
  return norm(scene.receivers[rx].position - scene.luminaires[tx].position) / kSpeedOfLight;
}

double diffuse_gain(const RoomScenario& scene) {
  const Vec3 d = scene.dimensions;
  const double surface = 2.0 * (d.x * d.y + d.x * d.z + d.y * d.z);
  return scene.reflectivity * scene.pd_area_m2 / surface;
}

SampledSignal synthesize_cir(const RoomScenario& scene, std::size_t tx, std::size_t rx, double sample_interval) {
  scene.validate();
  if (!(sample_interval > 0.0)) throw ConfigError("sample interval must be positive");
  const double dt = sample_interval;
  const double delay = path_delay(scene, tx, rx);
  const double g_los = los_gain(scene, tx, rx);
  const double g_diff = diffuse_gain(scene);

  const auto los_index = static_cast<std::int64_t>(std::llround(delay / dt));
  const auto tail_index = static_cast<std::int64_t>(std::floor(delay / dt));
  const std::int64_t start = std::min(los_index, tail_index);

  std::vector<Complex> samples(static_cast<std::size_t>(los_index - start + 1));
  samples[static_cast<std::size_t>(los_index - start)] += g_los / dt;

  if (g_diff > 0.0) {
    const double a = 2.0 * scene.dimensions.z / kSpeedOfLight;
    // Fraction of the diffuse energy still to arrive tau seconds after the onset.
    auto remaining = [a](double tau) { return tau <= 0.0 ? 1.0 : std::pow(a / (tau + a), 6.0); };
    constexpr double tail_tolerance = 1e-9;
    double assigned = 0.0;
    for (std::int64_t n = tail_index;; ++n) {
      const double lo = static_cast<double>(n) * dt - delay;
      const double hi = lo + dt;
      const double mass = remaining(lo) - remaining(hi);
      const auto idx = static_cast<std::size_t>(n - start);
      if (idx >= samples.size()) samples.resize(idx + 1);
      assigned += mass;
      const bool last = remaining(hi) < tail_tolerance;
      const double bin_mass = last ? mass + (1.0 - assigned) : mass;
      samples[idx] += g_diff * bin_mass / dt;
      if (last) break;
    }
  }
  return SampledSignal(std::move(samples), dt, start);
}

}  // namespace vlcrelay
