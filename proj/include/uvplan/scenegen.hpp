#pragma once

#include "uvplan/segmentation.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace uvplan {

// Synthetic depth-camera scenes with ground-truth labels. These stand in for
// a live sensor: each table contributes a rectangular top surface, the floor
// fills the sensor's range disk, and every sample is perturbed along its
// viewing ray by zero-mean Gaussian depth noise.

struct TableSpec {
  Vector2d center = Vector2d::Zero();  // ground-plane position
  double width = 1.0;                  // meters, along local x before yaw
  double depth = 1.0;                  // meters, along local y before yaw
  double height = 0.5;                 // table-top height
  double yaw = 0.0;                    // radians

  double area() const { return width * depth; }
  Matrix3Xd corners() const;  // 3 x 4, counter-clockwise, z = height
};

struct SceneSpec {
  std::vector<TableSpec> tables;
  double floor_extent = 6.0;              // square floor side, centered at origin
  double table_points_per_m2 = 25000.0;   // raw sample density on table tops
  double floor_points_per_m2 = 2000.0;    // raw sample density on the floor
  double depth_noise_rel = 0.02;          // noise sigma = rel * range along the ray
  double max_range = 1.3;                 // drop samples beyond this sensor range
};

struct LabeledCloud {
  PointCloud cloud;                 // sensor frame
  std::vector<int> labels;          // -1 floor, otherwise table index
  Pose3D sensor;                    // sensor pose in the map frame
};

// One frame viewing `table_index` from `sensor_height` above the table top.
LabeledCloud render_frame(const SceneSpec& scene, size_t table_index, double sensor_height,
                          std::mt19937_64& rng);

// Random desk-scale room: n_tables tables with pairwise centroid separation
// above the association radius so distinct tables never merge.
SceneSpec random_scene(int n_tables, std::mt19937_64& rng);

}  // namespace uvplan
