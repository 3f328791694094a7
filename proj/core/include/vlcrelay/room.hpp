#pragma once

#include <cstddef>
#include <vector>

#include "vlcrelay/signal.hpp"

namespace vlcrelay {

inline constexpr double kSpeedOfLight = 299792458.0;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
double norm(Vec3 v);
Vec3 normalized(Vec3 v);

// Position plus the direction the device faces (need not be unit length).
struct Pose {
  Vec3 position;
  Vec3 normal{0.0, 0.0, -1.0};
};

/// Geometry of a rectangular room with Lambertian luminaires and
/// photodetectors. The room spans [0, dimensions] on each axis.
struct RoomScenario {
  Vec3 dimensions{5.0, 5.0, 3.0};
  std::vector<Pose> luminaires;
  std::vector<Pose> receivers;
  double half_angle_deg = 40.0;
  double pd_area_m2 = 1e-4;
  double fov_deg = 85.0;
  double reflectivity = 0.8;  // average wall reflectivity

  void validate() const;
};

// m = -ln 2 / ln cos(half-angle)
double lambertian_order(double half_angle_deg);

// DC gain of the line-of-sight path; zero when the receiver is behind the
// transmitter or the arrival angle exceeds the field of view.
double los_gain(const RoomScenario& scene, std::size_t tx, std::size_t rx);
double path_delay(const RoomScenario& scene, std::size_t tx, std::size_t rx);
// DC gain of the diffuse (reflected) component at any receiver.
double diffuse_gain(const RoomScenario& scene);

/// Line-of-sight tap at delay d / c plus a ceiling-bounce diffuse tail
/// H_diff * 6 a^6 / (t + a)^7 starting at the same delay, with
/// a = 2 * (room height) / c. Each tail sample holds the exact integral of the
/// model over its bin, and the truncated remainder is folded into the last
/// sample so the integral equals los + diffuse gain.
SampledSignal synthesize_cir(const RoomScenario& scene, std::size_t tx, std::size_t rx, double sample_interval);

}  // namespace vlcrelay
