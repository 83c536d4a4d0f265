#pragma once

#include "uvplan/geometry.hpp"

#include <stdexcept>
#include <variant>
#include <vector>

namespace uvplan {

// Receiving surface element for the dose model.
struct SurfaceSample {
  Vector3d position = Vector3d::Zero();
  Vector3d unit_normal = Vector3d::UnitZ();
};

// n x n grid of LEDs spanning panel_side x panel_side, centered on `pose`
// with every LED emitting along the panel's optical axis (+z of pose).
struct LedPanelSource {
  int grid_n = 5;
  double panel_side = 0.025;              // meters
  double per_led_radiant_power = 0.028;   // watts
  double electrical_wattage = 30.0;       // watts
  Pose3D pose;

  Matrix3Xd led_positions() const;
  double radiant_power() const { return grid_n * grid_n * per_led_radiant_power; }
  LedPanelSource transformed(const Pose3D& rig) const {
    LedPanelSource out = *this;
    out.pose = rig.compose(pose);
    return out;
  }
};

// Bank of low-pressure tube lamps. Each lamp axis is the +z of its pose and
// the lamp spans +-lamp_length/2 about the pose position; irradiance is
// evaluated by splitting every lamp into segment_count isotropic point
// sources. Poses are rig-local and move together under `transformed`.
struct TubeLampBankSource {
  int lamp_count = 5;
  double lamp_length = 1.19;              // meters
  double per_lamp_radiant_power = 27.0;   // watts
  double per_lamp_wattage = 115.0;        // watts
  int segment_count = 64;
  std::vector<Pose3D> poses = std::vector<Pose3D>(5);

  Matrix3Xd segment_midpoints() const;
  double radiant_power() const { return lamp_count * per_lamp_radiant_power; }
  TubeLampBankSource transformed(const Pose3D& rig) const {
    TubeLampBankSource out = *this;
    for (auto& p : out.poses) p = rig.compose(p);
    return out;
  }
};

using LightSource = std::variant<LedPanelSource, TubeLampBankSource>;

// Lambertian point emitter: E = P/(pi d^2) * max(cos_e, 0) * max(cos_i, 0),
// where cos_e is against the emitter normal and cos_i against the receiving
// normal. Throws when emitter and target coincide.
inline double irradiance_lambertian_point(const Vector3d& emitter_pos,
                                          const Vector3d& emitter_normal, double radiant_power,
                                          const SurfaceSample& target) {
  const Vector3d diff = target.position - emitter_pos;
  const double d2 = diff.squaredNorm();
  if (d2 <= 0.0) {
    throw std::invalid_argument("irradiance_lambertian_point: target coincides with emitter");
  }
  const double a = emitter_normal.dot(diff);   // d * cos_e
  const double b = -target.unit_normal.dot(diff);  // d * cos_i
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return radiant_power / kPi * a * b / (d2 * d2);
}

// Isotropic point emitter with receiving cosine: E = P/(4 pi d^2) * max(cos_i, 0).
inline double irradiance_isotropic_point(const Vector3d& emitter_pos, double radiant_power,
                                         const SurfaceSample& target) {
  const Vector3d diff = target.position - emitter_pos;
  const double d2 = diff.squaredNorm();
  if (d2 <= 0.0) {
    throw std::invalid_argument("irradiance_isotropic_point: target coincides with emitter");
  }
  const double b = -target.unit_normal.dot(diff);
  if (b <= 0.0) return 0.0;
  return radiant_power / (4.0 * kPi) * b / (d2 * std::sqrt(d2));
}

double irradiance_panel(const LedPanelSource& src, const SurfaceSample& target);
double irradiance_lamp_bank(const TubeLampBankSource& src, const SurfaceSample& target);

double irradiance(const LightSource& src, const SurfaceSample& target);
double electrical_power(const LightSource& src);
double radiant_power(const LightSource& src);
LightSource transformed(const LightSource& src, const Pose3D& rig);

double electrical_power(const std::vector<LightSource>& sources);
double radiant_power(const std::vector<LightSource>& sources);

}  // namespace uvplan
