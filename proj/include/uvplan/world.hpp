#pragma once

#include "uvplan/geometry.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace uvplan {

enum class Cell : std::uint8_t { Free, Occupied, Unknown };

// 2-D occupancy grid map. `origin` is the pose of the lower-left corner of
// cell (0, 0); cells are stored row-major, index = y * width + x. The origin
// rotation is carried for serialization but cell indexing assumes theta = 0.
struct OccupancyGrid {
  double resolution = 0.05;
  int width = 0;
  int height = 0;
  Pose2D origin;
  std::vector<Cell> cells;

  static OccupancyGrid uniform(int width, int height, double resolution, Cell fill = Cell::Free,
                               Pose2D origin = {});

  bool in_bounds(int cx, int cy) const { return cx >= 0 && cx < width && cy >= 0 && cy < height; }
  Cell at(int cx, int cy) const { return cells[static_cast<size_t>(cy) * width + cx]; }
  Cell& at(int cx, int cy) { return cells[static_cast<size_t>(cy) * width + cx]; }

  Eigen::Vector2i cell_of(double x, double y) const {
    return {static_cast<int>(std::floor((x - origin.x) / resolution)),
            static_cast<int>(std::floor((y - origin.y) / resolution))};
  }
  Pose2D center_of(int cx, int cy, double theta = 0.0) const {
    return {origin.x + (cx + 0.5) * resolution, origin.y + (cy + 0.5) * resolution, theta};
  }
};

// Planar disinfection target. Vertices are ordered and coplanar; `area` is
// the shoelace area of the vertices projected into the plane.
struct SurfacePolygon {
  int id = 0;
  Matrix3Xd vertices;
  Vector3d unit_normal = Vector3d::UnitZ();
  Vector3d centroid = Vector3d::Zero();
  double area = 0.0;
};

// Builds a polygon from ordered vertices, deriving normal (Newell's method,
// orientation follows vertex winding), area centroid and shoelace area.
// Throws std::invalid_argument on degenerate input.
SurfacePolygon make_polygon(const Matrix3Xd& vertices, int id = 0);

// Throws std::invalid_argument when any SurfacePolygon invariant is violated:
// >= 3 vertices, unit normal, coplanarity within 1 mm, positive area that
// matches the shoelace area of the plane-projected vertices.
void validate_polygon(const SurfacePolygon& polygon);

// Four corners (3-D, counter-clockwise) of the polygon's minimum-area
// bounding rectangle in its own plane.
Matrix3Xd bounding_rectangle_corners(const SurfacePolygon& polygon);

// Association rule for re-detections of the same surface: centroids within
// 1.3 m AND at least one fitted-rectangle corner pair within 0.30 m. Corner
// pairs are matched greedily by distance; the first greedy pair is the global
// minimum, so the test reduces to the minimum pairwise corner distance.
bool polygons_associated(const SurfacePolygon& a, const SurfacePolygon& b);

inline constexpr double kAssocCentroidMax = 1.3;   // meters
inline constexpr double kAssocCornerMax = 0.30;    // meters

// Persistent map of detected surfaces. Entries are kept mutually
// non-associated; ids are assigned once and never reused.
struct PolygonDictionary {
  std::map<int, SurfacePolygon> entries;
  int next_id = 1;
};

// Inserts `candidate` with a fresh id when it associates with no entry.
// When it associates with existing entries it replaces them only if its area
// is strictly larger than all of theirs (the survivor keeps the id of the
// largest replaced entry); otherwise the dictionary is unchanged.
// Throws if `candidate` violates the SurfacePolygon invariants.
PolygonDictionary dictionary_update(PolygonDictionary dict, const SurfacePolygon& candidate);

// 8-connected A* over free cells (Euclidean heuristic, diagonal step cost
// sqrt(2) * resolution). Returned poses are cell centers with theta facing
// the next cell; start == goal yields a single-pose path. An empty result
// means the goal is unreachable. Throws std::invalid_argument when start or
// goal is out of bounds or not on a free cell.
std::vector<Pose2D> plan_base_path(const OccupancyGrid& grid, const Pose2D& start,
                                   const Pose2D& goal);

// Path cost recomputed from step counts (straight + sqrt(2) * diagonal), so
// any two optimal paths report bit-identical cost.
double path_cost(const std::vector<Pose2D>& path, double resolution);

}  // namespace uvplan
