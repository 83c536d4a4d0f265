#include "uvplan/irradiance.hpp"

namespace uvplan {

Matrix3Xd LedPanelSource::led_positions() const {
  if (grid_n < 1) throw std::invalid_argument("LedPanelSource: grid_n must be >= 1");
  Matrix3Xd out(3, grid_n * grid_n);
  Eigen::Index col = 0;
  for (int iy = 0; iy < grid_n; ++iy) {
    for (int ix = 0; ix < grid_n; ++ix) {
      // Uniform grid spanning the panel side, edges inclusive.
      const double fx = grid_n == 1 ? 0.0 : (ix / (grid_n - 1.0) - 0.5);
      const double fy = grid_n == 1 ? 0.0 : (iy / (grid_n - 1.0) - 0.5);
      out.col(col++) = pose.apply({fx * panel_side, fy * panel_side, 0.0});
    }
  }
  return out;
}

Matrix3Xd TubeLampBankSource::segment_midpoints() const {
  if (segment_count < 1) throw std::invalid_argument("TubeLampBankSource: segment_count >= 1");
  if (static_cast<int>(poses.size()) != lamp_count) {
    throw std::invalid_argument("TubeLampBankSource: poses size must equal lamp_count");
  }
  Matrix3Xd out(3, lamp_count * segment_count);
  Eigen::Index col = 0;
  for (const Pose3D& lamp : poses) {
    for (int s = 0; s < segment_count; ++s) {
      const double z = (-0.5 + (s + 0.5) / segment_count) * lamp_length;
      out.col(col++) = lamp.apply({0.0, 0.0, z});
    }
  }
  return out;
}

double irradiance_panel(const LedPanelSource& src, const SurfaceSample& target) {
  const Matrix3Xd leds = src.led_positions();
  const Vector3d axis = src.pose.axis();
  double total = 0.0;
  for (Eigen::Index i = 0; i < leds.cols(); ++i) {
    total += irradiance_lambertian_point(leds.col(i), axis, src.per_led_radiant_power, target);
  }
  return total;
}

double irradiance_lamp_bank(const TubeLampBankSource& src, const SurfaceSample& target) {
  const Matrix3Xd mids = src.segment_midpoints();
  const double seg_power = src.per_lamp_radiant_power / src.segment_count;
  double total = 0.0;
  for (Eigen::Index i = 0; i < mids.cols(); ++i) {
    total += irradiance_isotropic_point(mids.col(i), seg_power, target);
  }
  return total;
}

double irradiance(const LightSource& src, const SurfaceSample& target) {
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LedPanelSource>) {
          return irradiance_panel(s, target);
        } else {
          return irradiance_lamp_bank(s, target);
        }
      },
      src);
}

double electrical_power(const LightSource& src) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LedPanelSource>) {
          return s.electrical_wattage;
        } else {
          return s.lamp_count * s.per_lamp_wattage;
        }
      },
      src);
}

double radiant_power(const LightSource& src) {
  return std::visit([](const auto& s) { return s.radiant_power(); }, src);
}

LightSource transformed(const LightSource& src, const Pose3D& rig) {
  return std::visit([&](const auto& s) -> LightSource { return s.transformed(rig); }, src);
}

double electrical_power(const std::vector<LightSource>& sources) {
  double total = 0.0;
  for (const auto& s : sources) total += electrical_power(s);
  return total;
}

double radiant_power(const std::vector<LightSource>& sources) {
  double total = 0.0;
  for (const auto& s : sources) total += radiant_power(s);
  return total;
}

}  // namespace uvplan
