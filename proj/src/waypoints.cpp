#include "uvplan/waypoints.hpp"

#include "uvplan/coverage.hpp"

#include <cmath>
#include <stdexcept>

namespace uvplan {

namespace {

TimedTrajectory timestamped(const std::vector<Vector3d>& waypoints, const Quaterniond& orientation,
                            double exposure, double fixed_speed) {
  double total = 0.0;
  std::vector<double> arc(waypoints.size(), 0.0);
  for (size_t i = 1; i < waypoints.size(); ++i) {
    total += (waypoints[i] - waypoints[i - 1]).norm();
    arc[i] = total;
  }
  const double duration = fixed_speed > 0.0 ? total / fixed_speed : exposure;
  if (!(duration > 0.0)) throw std::invalid_argument("scan: non-positive duration");

  TimedTrajectory traj;
  traj.times.reserve(waypoints.size());
  traj.poses.reserve(waypoints.size());
  for (size_t i = 0; i < waypoints.size(); ++i) {
    // Constant speed: time proportional to arc length.
    traj.times.push_back(total > 0.0 ? arc[i] / total * duration
                                     : duration * static_cast<double>(i) /
                                           static_cast<double>(waypoints.size() - 1));
    traj.poses.push_back({waypoints[i], orientation});
  }
  traj.validate();
  return traj;
}

}  // namespace

TimedTrajectory boustrophedon(const SurfacePolygon& rectangle, const ScanPattern& pattern,
                              double exposure, std::vector<std::string>* warnings) {
  validate_polygon(rectangle);
  if (rectangle.vertices.cols() != 4) {
    throw std::invalid_argument("boustrophedon: polygon must be a fitted rectangle");
  }
  if (pattern.standoff <= 0.0 || pattern.lane_spacing <= 0.0) {
    throw std::invalid_argument("boustrophedon: standoff and lane_spacing must be positive");
  }
  if (exposure <= 0.0 && pattern.speed <= 0.0) {
    throw std::invalid_argument("boustrophedon: exposure must be positive");
  }

  const Vector3d v0 = rectangle.vertices.col(0);
  Vector3d e01 = rectangle.vertices.col(1) - v0;
  Vector3d e03 = rectangle.vertices.col(3) - v0;
  // Lanes run parallel to the longer side.
  if (e01.norm() < e03.norm()) std::swap(e01, e03);
  const double lane_len = e01.norm();
  const double width = e03.norm();
  const Vector3d lane_dir = e01 / lane_len;
  const Vector3d cross_dir = e03 / width;

  int lanes;
  double spacing;
  if (pattern.lane_spacing > width) {
    lanes = 1;
    spacing = 0.0;
    if (warnings != nullptr) {
      warnings->push_back("boustrophedon: lane_spacing " + std::to_string(pattern.lane_spacing) +
                          " exceeds rectangle width " + std::to_string(width) +
                          "; single-lane fallback for polygon " + std::to_string(rectangle.id));
    }
  } else {
    lanes = static_cast<int>(std::ceil(width / pattern.lane_spacing - 1e-9)) + 1;
    spacing = width / (lanes - 1);
  }

  const Vector3d lift = pattern.standoff * rectangle.unit_normal;
  std::vector<Vector3d> waypoints;
  waypoints.reserve(static_cast<size_t>(2 * lanes));
  for (int lane = 0; lane < lanes; ++lane) {
    const double offset = lanes == 1 ? width / 2.0 : lane * spacing;
    const Vector3d near_end = v0 + offset * cross_dir + lift;
    const Vector3d far_end = near_end + lane_len * lane_dir;
    if (lane % 2 == 0) {
      waypoints.push_back(near_end);
      waypoints.push_back(far_end);
    } else {
      waypoints.push_back(far_end);
      waypoints.push_back(near_end);
    }
  }

  // Emitter axis locked anti-parallel to the surface normal.
  const Quaterniond orientation = look_orientation(-rectangle.unit_normal, lane_dir);
  return timestamped(waypoints, orientation, exposure, pattern.speed);
}

TimedTrajectory line_scan(const SurfacePolygon& wall, double distance, double exposure) {
  validate_polygon(wall);
  if (distance <= 0.0) throw std::invalid_argument("line_scan: distance must be positive");
  if (exposure <= 0.0) throw std::invalid_argument("line_scan: exposure must be positive");
  if (wall.vertices.cols() != 4) {
    throw std::invalid_argument("line_scan: polygon must be a fitted rectangle");
  }

  // Pick the edge with the larger ground-plane footprint as the horizontal
  // extent of the wall.
  const Vector3d e01 = wall.vertices.col(1) - wall.vertices.col(0);
  const Vector3d e03 = wall.vertices.col(3) - wall.vertices.col(0);
  const double h01 = std::hypot(e01.x(), e01.y());
  const double h03 = std::hypot(e03.x(), e03.y());
  const Vector3d horiz = h01 >= h03 ? e01 : e03;
  const double extent = horiz.norm();
  if (std::max(h01, h03) < 1e-9) {
    throw std::invalid_argument("line_scan: wall has no horizontal extent");
  }
  const Vector3d dir = horiz / extent;

  const Vector3d offset_center = wall.centroid + distance * wall.unit_normal;
  const Vector3d a = offset_center - 0.5 * extent * dir;
  const Vector3d b = offset_center + 0.5 * extent * dir;
  const Quaterniond orientation = look_orientation(-wall.unit_normal, dir);
  return timestamped({a, b}, orientation, exposure, 0.0);
}

Mission assemble_mission(const std::vector<int>& order, const PolygonDictionary& dict,
                         const OccupancyGrid& grid, const ScanPattern& pattern,
                         double per_cell_exposure, const Pose2D& start) {
  if (per_cell_exposure <= 0.0) {
    throw std::invalid_argument("assemble_mission: per_cell_exposure must be positive");
  }
  Mission mission;
  mission.cell_order = order;

  Pose2D current = start;
  for (int id : order) {
    const auto it = dict.entries.find(id);
    if (it == dict.entries.end()) {
      throw std::invalid_argument("assemble_mission: unknown polygon id " + std::to_string(id));
    }
    const SurfacePolygon& poly = it->second;

    const Vector2d ground(poly.centroid.x(), poly.centroid.y());
    const auto cell = nearest_free_cell(grid, ground);
    if (!cell) {
      throw std::runtime_error("assemble_mission: no free approach cell for polygon " +
                               std::to_string(id));
    }
    Pose2D approach = grid.center_of(cell->x(), cell->y());
    approach = {approach.x, approach.y,
                std::atan2(ground.y() - approach.y, ground.x() - approach.x)};

    std::vector<Pose2D> leg = plan_base_path(grid, current, approach);
    if (leg.empty()) {
      throw std::runtime_error("assemble_mission: polygon " + std::to_string(id) +
                               " unreachable from previous pose");
    }
    mission.base_paths.push_back(std::move(leg));
    mission.scans.push_back(boustrophedon(poly, pattern, per_cell_exposure, &mission.warnings));
    mission.total_exposure += per_cell_exposure;
    current = approach;
  }
  return mission;
}

}  // namespace uvplan
