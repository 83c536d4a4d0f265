#pragma once

#include "uvplan/irradiance.hpp"
#include "uvplan/world.hpp"

#include <map>
#include <string>
#include <vector>

namespace uvplan {

// Discretized target rectangle: cell centers carry the polygon normal.
// Row-major indexing, cell (i, j) -> i * nx + j with j along the first
// rectangle edge and i along the adjacent edge.
struct SurfaceGrid {
  SurfacePolygon polygon;
  double cell_size = 0.01;
  int nx = 0;
  int ny = 0;
  double cell_area = 0.0;
  Matrix3Xd cell_centers;
  Vector3d normal = Vector3d::UnitZ();

  // `polygon` must be a 4-vertex rectangle (e.g. from fit_rectangle).
  static SurfaceGrid from_polygon(const SurfacePolygon& polygon, double cell_size);

  Eigen::Index cell_count() const { return cell_centers.cols(); }
  SurfaceSample sample(Eigen::Index idx) const { return {cell_centers.col(idx), normal}; }
};

// Timed sequence of rig poses; timestamps strictly increasing.
struct TimedTrajectory {
  std::vector<double> times;
  std::vector<Pose3D> poses;

  double duration() const { return times.empty() ? 0.0 : times.back() - times.front(); }
  void validate() const;  // throws std::invalid_argument
  // Piecewise pose: linear in position, spherical-linear in orientation;
  // clamps outside [t_first, t_last].
  Pose3D pose_at(double t) const;
};

struct DoseMap {
  SurfaceGrid grid;
  Eigen::VectorXd dose;  // J/m^2, one entry per cell
};

struct PathogenDoseTable {
  std::map<std::string, double> required;  // J/m^2

  // 99% inactivation doses for the two reference pathogens.
  static PathogenDoseTable defaults() {
    return {{{"MRSA", 64.0}, {"C_difficile", 120.0}}};
  }
};

struct DisinfectionReport {
  double avg_dose = 0.0;            // J/m^2
  double min_dose = 0.0;            // J/m^2
  double exposure_time = 0.0;       // seconds
  double energy_consumption = 0.0;  // watt-hours
  double dpu = 0.0;                 // (J/m^2) / (W*hr)
  std::map<std::string, double> coverage;  // fraction of cells at/above threshold
};

// Accumulates dose per cell with the left-endpoint rectangle rule at step dt,
// the rig pose interpolated along the trajectory and each source rigidly
// attached to the rig. Per-source contributions are accumulated separately
// and summed in source order, so source superposition is exact.
// Throws on dt <= 0, empty grid/trajectory, or duration < dt.
DoseMap simulate_dose(const std::vector<LightSource>& sources, const TimedTrajectory& traj,
                      const SurfaceGrid& grid, double dt = 0.05);

DisinfectionReport report(const DoseMap& map, const std::vector<LightSource>& sources,
                          double exposure_time,
                          const PathogenDoseTable& pathogens = PathogenDoseTable::defaults());

// (sum of dose * cell_area) / (total radiant power * exposure_time).
// For a single flat non-reflective target this must stay <= 1 plus
// quadrature tolerance. Throws on zero radiant power.
double conservation_check(const DoseMap& map, const std::vector<LightSource>& sources,
                          double exposure_time);

}  // namespace uvplan
