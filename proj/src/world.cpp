#include "uvplan/world.hpp"

#include "uvplan/planar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace uvplan {

OccupancyGrid OccupancyGrid::uniform(int width, int height, double resolution, Cell fill,
                                     Pose2D origin) {
  if (width <= 0 || height <= 0 || resolution <= 0.0) {
    throw std::invalid_argument("OccupancyGrid: width, height and resolution must be positive");
  }
  OccupancyGrid grid;
  grid.resolution = resolution;
  grid.width = width;
  grid.height = height;
  grid.origin = origin;
  grid.cells.assign(static_cast<size_t>(width) * height, fill);
  return grid;
}

namespace {

// Newell's method; orientation follows the vertex winding.
Vector3d newell_normal(const Matrix3Xd& v) {
  Vector3d n = Vector3d::Zero();
  const Eigen::Index count = v.cols();
  for (Eigen::Index i = 0; i < count; ++i) {
    const Vector3d& a = v.col(i);
    const Vector3d& b = v.col((i + 1) % count);
    n.x() += (a.y() - b.y()) * (a.z() + b.z());
    n.y() += (a.z() - b.z()) * (a.x() + b.x());
    n.z() += (a.x() - b.x()) * (a.y() + b.y());
  }
  return n;
}

Matrix2Xd project_vertices(const SurfacePolygon& poly) {
  const PlaneBasis basis = plane_basis(poly.centroid, poly.unit_normal);
  Matrix2Xd flat(2, poly.vertices.cols());
  for (Eigen::Index i = 0; i < poly.vertices.cols(); ++i) {
    flat.col(i) = basis.project(poly.vertices.col(i));
  }
  return flat;
}

}  // namespace

SurfacePolygon make_polygon(const Matrix3Xd& vertices, int id) {
  if (vertices.cols() < 3) throw std::invalid_argument("make_polygon: need at least 3 vertices");
  if (!vertices.allFinite()) throw std::invalid_argument("make_polygon: non-finite vertex");

  const Vector3d n = newell_normal(vertices);
  if (n.norm() < 1e-12) throw std::invalid_argument("make_polygon: degenerate vertex set");

  SurfacePolygon poly;
  poly.id = id;
  poly.vertices = vertices;
  poly.unit_normal = n.normalized();

  // Area centroid via the plane projection (equals the vertex mean only for
  // symmetric shapes, so compute it properly).
  const PlaneBasis basis = plane_basis(vertices.rowwise().mean(), poly.unit_normal);
  Matrix2Xd flat(2, vertices.cols());
  for (Eigen::Index i = 0; i < vertices.cols(); ++i) flat.col(i) = basis.project(vertices.col(i));

  double twice_area = 0.0;
  Vector2d weighted = Vector2d::Zero();
  for (Eigen::Index i = 0; i < flat.cols(); ++i) {
    const Vector2d& a = flat.col(i);
    const Vector2d& b = flat.col((i + 1) % flat.cols());
    const double w = a.x() * b.y() - b.x() * a.y();
    twice_area += w;
    weighted += w * (a + b);
  }
  if (std::abs(twice_area) < 1e-15) {
    throw std::invalid_argument("make_polygon: zero-area polygon");
  }
  poly.area = std::abs(twice_area) / 2.0;
  poly.centroid = basis.lift(weighted / (3.0 * twice_area));

  validate_polygon(poly);
  return poly;
}

void validate_polygon(const SurfacePolygon& polygon) {
  if (polygon.vertices.cols() < 3) {
    throw std::invalid_argument("SurfacePolygon: need at least 3 vertices");
  }
  if (std::abs(polygon.unit_normal.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("SurfacePolygon: normal is not unit length");
  }
  for (Eigen::Index i = 0; i < polygon.vertices.cols(); ++i) {
    const double dist =
        std::abs(polygon.unit_normal.dot(polygon.vertices.col(i) - polygon.centroid));
    if (dist > 1e-3) {
      throw std::invalid_argument("SurfacePolygon: vertex more than 1 mm off the plane");
    }
  }
  const double shoelace = polygon_area(project_vertices(polygon));
  if (!(polygon.area > 0.0) ||
      std::abs(polygon.area - shoelace) > 1e-9 * std::max(1.0, shoelace)) {
    throw std::invalid_argument("SurfacePolygon: area does not match shoelace area");
  }
}

Matrix3Xd bounding_rectangle_corners(const SurfacePolygon& polygon) {
  const PlaneBasis basis = plane_basis(polygon.centroid, polygon.unit_normal);
  Matrix2Xd flat(2, polygon.vertices.cols());
  for (Eigen::Index i = 0; i < polygon.vertices.cols(); ++i) {
    flat.col(i) = basis.project(polygon.vertices.col(i));
  }
  const Matrix2Xd corners = min_area_rect(flat).corners();
  Matrix3Xd lifted(3, 4);
  for (Eigen::Index i = 0; i < 4; ++i) lifted.col(i) = basis.lift(corners.col(i));
  return lifted;
}

bool polygons_associated(const SurfacePolygon& a, const SurfacePolygon& b) {
  if ((a.centroid - b.centroid).norm() > kAssocCentroidMax) return false;
  const Matrix3Xd ca = bounding_rectangle_corners(a);
  const Matrix3Xd cb = bounding_rectangle_corners(b);
  double min_dist = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) {
      min_dist = std::min(min_dist, (ca.col(i) - cb.col(j)).norm());
    }
  }
  return min_dist <= kAssocCornerMax;
}

PolygonDictionary dictionary_update(PolygonDictionary dict, const SurfacePolygon& candidate) {
  validate_polygon(candidate);

  std::vector<int> associated;
  for (const auto& [id, entry] : dict.entries) {
    if (polygons_associated(entry, candidate)) associated.push_back(id);
  }

  if (associated.empty()) {
    SurfacePolygon fresh = candidate;
    fresh.id = dict.next_id++;
    dict.entries.emplace(fresh.id, std::move(fresh));
    return dict;
  }

  // Larger area wins; the survivor keeps the id of the largest associated
  // entry so downstream mission references stay valid.
  int keep_id = associated.front();
  double max_area = dict.entries.at(keep_id).area;
  for (int id : associated) {
    const double area = dict.entries.at(id).area;
    if (area > max_area) {
      max_area = area;
      keep_id = id;
    }
  }
  if (candidate.area <= max_area) return dict;

  for (int id : associated) dict.entries.erase(id);
  SurfacePolygon replacement = candidate;
  replacement.id = keep_id;
  dict.entries.emplace(keep_id, std::move(replacement));
  return dict;
}

namespace {

struct AStarNode {
  double f;
  double g;
  int index;
  bool operator>(const AStarNode& other) const {
    if (f != other.f) return f > other.f;
    if (g != other.g) return g > other.g;
    return index > other.index;
  }
};

constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

}  // namespace

std::vector<Pose2D> plan_base_path(const OccupancyGrid& grid, const Pose2D& start,
                                   const Pose2D& goal) {
  const Eigen::Vector2i s = grid.cell_of(start.x, start.y);
  const Eigen::Vector2i g = grid.cell_of(goal.x, goal.y);
  if (!grid.in_bounds(s.x(), s.y()) || !grid.in_bounds(g.x(), g.y())) {
    throw std::invalid_argument("plan_base_path: start or goal outside grid bounds");
  }
  if (grid.at(s.x(), s.y()) != Cell::Free || grid.at(g.x(), g.y()) != Cell::Free) {
    throw std::invalid_argument("plan_base_path: start or goal not on a free cell");
  }

  const int start_idx = s.y() * grid.width + s.x();
  const int goal_idx = g.y() * grid.width + g.x();
  if (start_idx == goal_idx) {
    return {grid.center_of(s.x(), s.y(), start.theta)};
  }

  const double res = grid.resolution;
  const double diag = std::sqrt(2.0) * res;
  const size_t n = grid.cells.size();
  std::vector<double> best_g(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);

  auto heuristic = [&](int idx) {
    const int cx = idx % grid.width, cy = idx / grid.width;
    const double dx = (cx - g.x()) * res, dy = (cy - g.y()) * res;
    return std::hypot(dx, dy);
  };

  std::priority_queue<AStarNode, std::vector<AStarNode>, std::greater<>> open;
  best_g[start_idx] = 0.0;
  open.push({heuristic(start_idx), 0.0, start_idx});

  while (!open.empty()) {
    const AStarNode node = open.top();
    open.pop();
    if (node.g > best_g[node.index]) continue;  // stale entry
    if (node.index == goal_idx) break;

    const int cx = node.index % grid.width, cy = node.index / grid.width;
    for (int d = 0; d < 8; ++d) {
      const int nx = cx + kDx[d], ny = cy + kDy[d];
      if (!grid.in_bounds(nx, ny) || grid.at(nx, ny) != Cell::Free) continue;
      const int nidx = ny * grid.width + nx;
      const double step = d < 4 ? res : diag;
      const double cand = node.g + step;
      if (cand < best_g[nidx]) {
        best_g[nidx] = cand;
        parent[nidx] = node.index;
        open.push({cand + heuristic(nidx), cand, nidx});
      }
    }
  }

  if (parent[goal_idx] < 0) return {};  // unreachable, distinct from errors

  std::vector<int> cells;
  for (int idx = goal_idx; idx >= 0; idx = parent[idx]) cells.push_back(idx);
  std::reverse(cells.begin(), cells.end());

  std::vector<Pose2D> path;
  path.reserve(cells.size());
  for (size_t i = 0; i < cells.size(); ++i) {
    const int cx = cells[i] % grid.width, cy = cells[i] / grid.width;
    double theta = goal.theta;
    if (i + 1 < cells.size()) {
      const int tx = cells[i + 1] % grid.width, ty = cells[i + 1] / grid.width;
      theta = std::atan2(static_cast<double>(ty - cy), static_cast<double>(tx - cx));
    }
    path.push_back(grid.center_of(cx, cy, theta));
  }
  return path;
}

double path_cost(const std::vector<Pose2D>& path, double resolution) {
  long straight = 0, diagonal = 0;
  for (size_t i = 1; i < path.size(); ++i) {
    const int dx = static_cast<int>(std::lround((path[i].x - path[i - 1].x) / resolution));
    const int dy = static_cast<int>(std::lround((path[i].y - path[i - 1].y) / resolution));
    if (std::abs(dx) + std::abs(dy) == 2 && dx != 0 && dy != 0) {
      ++diagonal;
    } else {
      straight += std::abs(dx) + std::abs(dy);
    }
  }
  return static_cast<double>(straight) * resolution +
         static_cast<double>(diagonal) * (std::sqrt(2.0) * resolution);
}

}  // namespace uvplan
