#include "uvplan/scenegen.hpp"

#include "uvplan/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace uvplan {

Matrix3Xd TableSpec::corners() const {
  const double c = std::cos(yaw), s = std::sin(yaw);
  const Vector2d ux(c, s), uy(-s, c);
  Matrix3Xd out(3, 4);
  const Vector2d half_x = 0.5 * width * ux, half_y = 0.5 * depth * uy;
  const Vector2d quad[4] = {center - half_x - half_y, center + half_x - half_y,
                            center + half_x + half_y, center - half_x + half_y};
  for (int i = 0; i < 4; ++i) out.col(i) = Vector3d(quad[i].x(), quad[i].y(), height);
  return out;
}

namespace {

void add_surface_samples(std::vector<Vector3d>& pts, std::vector<int>& labels, int label,
                         const Vector3d& origin, const Vector3d& ux, const Vector3d& uy,
                         double len_x, double len_y, double density, const SceneSpec& scene,
                         const Vector3d& sensor_pos, std::mt19937_64& rng) {
  const long count = std::lround(density * len_x * len_y);
  for (long i = 0; i < count; ++i) {
    const Vector3d p =
        origin + uniform_range(rng, 0.0, len_x) * ux + uniform_range(rng, 0.0, len_y) * uy;
    Vector3d ray = p - sensor_pos;
    const double range = ray.norm();
    if (range > scene.max_range || range < 1e-9) continue;
    ray /= range;
    const double noisy = range + gaussian(rng, 0.0, scene.depth_noise_rel * range);
    pts.push_back(sensor_pos + noisy * ray);
    labels.push_back(label);
  }
}

}  // namespace

LabeledCloud render_frame(const SceneSpec& scene, size_t table_index, double sensor_height,
                          std::mt19937_64& rng) {
  if (table_index >= scene.tables.size()) {
    throw std::invalid_argument("render_frame: table index out of range");
  }
  const TableSpec& focus = scene.tables[table_index];

  LabeledCloud frame;
  frame.sensor.position =
      Vector3d(focus.center.x(), focus.center.y(), focus.height + sensor_height);
  frame.sensor.orientation = look_orientation(-Vector3d::UnitZ(), Vector3d::UnitX());

  std::vector<Vector3d> pts;
  std::vector<int> labels;

  for (size_t t = 0; t < scene.tables.size(); ++t) {
    const TableSpec& table = scene.tables[t];
    const Matrix3Xd corners = table.corners();
    const Vector3d ux = (corners.col(1) - corners.col(0)).normalized();
    const Vector3d uy = (corners.col(3) - corners.col(0)).normalized();
    add_surface_samples(pts, labels, static_cast<int>(t), corners.col(0), ux, uy, table.width,
                        table.depth, scene.table_points_per_m2, scene, frame.sensor.position,
                        rng);
  }
  add_surface_samples(pts, labels, -1,
                      Vector3d(-scene.floor_extent / 2.0, -scene.floor_extent / 2.0, 0.0),
                      Vector3d::UnitX(), Vector3d::UnitY(), scene.floor_extent,
                      scene.floor_extent, scene.floor_points_per_m2, scene,
                      frame.sensor.position, rng);

  // Store points in the sensor frame so the preprocess transform is exercised.
  const Quaterniond inv = frame.sensor.orientation.conjugate();
  frame.cloud.points.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    frame.cloud.points.col(static_cast<Eigen::Index>(i)) =
        inv * (pts[i] - frame.sensor.position);
  }
  frame.cloud.frame = "sensor";
  frame.cloud.sensor_pose = Eigen::Isometry3d::Identity();
  frame.cloud.sensor_pose.translate(frame.sensor.position);
  frame.cloud.sensor_pose.rotate(frame.sensor.orientation);
  frame.labels = std::move(labels);
  return frame;
}

SceneSpec random_scene(int n_tables, std::mt19937_64& rng) {
  if (n_tables < 1) throw std::invalid_argument("random_scene: need at least one table");

  SceneSpec scene;
  // Separation keeps distinct tables from associating in the dictionary
  // (> 1.3 m centroid rule) and out of each other's sensor range, so every
  // frame sees exactly one table.
  constexpr double kMinSeparation = 2.25;
  const double span = scene.floor_extent / 2.0 - 0.6;

  for (int t = 0; t < n_tables; ++t) {
    TableSpec table;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 5000) throw std::runtime_error("random_scene: placement failed");
      table.center = {uniform_range(rng, -span, span), uniform_range(rng, -span, span)};
      bool ok = true;
      for (const TableSpec& other : scene.tables) {
        if ((other.center - table.center).norm() < kMinSeparation) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    table.width = uniform_range(rng, 0.7, 1.0);
    table.depth = uniform_range(rng, 0.7, 1.0);
    table.height = uniform_range(rng, 0.45, 0.8);
    table.yaw = uniform_range(rng, 0.0, kPi);
    scene.tables.push_back(table);
  }
  return scene;
}

}  // namespace uvplan
