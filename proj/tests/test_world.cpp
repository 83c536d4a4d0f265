#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uvplan/rng.hpp"
#include "uvplan/world.hpp"

#include <cmath>

using namespace uvplan;

namespace {

SurfacePolygon axis_rect(double cx, double cy, double half_x, double half_y, double z = 0.0) {
  Matrix3Xd v(3, 4);
  v.col(0) = Vector3d(cx - half_x, cy - half_y, z);
  v.col(1) = Vector3d(cx + half_x, cy - half_y, z);
  v.col(2) = Vector3d(cx + half_x, cy + half_y, z);
  v.col(3) = Vector3d(cx - half_x, cy + half_y, z);
  return make_polygon(v);
}

SurfacePolygon random_rect(std::mt19937_64& rng) {
  const double cx = uniform_range(rng, -1.0, 1.0);
  const double cy = uniform_range(rng, -1.0, 1.0);
  const double cz = uniform_range(rng, 0.0, 1.0);
  const double yaw = uniform_range(rng, 0.0, kPi);
  const double hx = uniform_range(rng, 0.1, 0.8);
  const double hy = uniform_range(rng, 0.1, 0.8);
  const double c = std::cos(yaw), s = std::sin(yaw);
  Matrix3Xd v(3, 4);
  const double sx[4] = {-1, 1, 1, -1};
  const double sy[4] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) {
    const double lx = sx[i] * hx, ly = sy[i] * hy;
    v.col(i) = Vector3d(cx + c * lx - s * ly, cy + s * lx + c * ly, cz);
  }
  return make_polygon(v);
}

OccupancyGrid random_grid(std::mt19937_64& rng, int w, int h, double res,
                          double occupied_fraction) {
  OccupancyGrid grid = OccupancyGrid::uniform(w, h, res);
  for (auto& cell : grid.cells) {
    if (uniform01(rng) < occupied_fraction) cell = Cell::Occupied;
  }
  return grid;
}

}  // namespace

TEST_CASE("polygons_associated: identical polygons associate") {
  const SurfacePolygon square = axis_rect(0, 0, 0.5, 0.5);
  CHECK(polygons_associated(square, square));
}

TEST_CASE("polygons_associated: 1.4 m centroid distance violates the 1.3 m rule") {
  const SurfacePolygon a = axis_rect(0, 0, 0.5, 0.5);
  const SurfacePolygon b = axis_rect(1.4, 0, 0.5, 0.5);
  CHECK_FALSE(polygons_associated(a, b));
}

TEST_CASE("polygons_associated: edge-sharing squares at 1.0 m associate") {
  const SurfacePolygon a = axis_rect(0.5, 0.5, 0.5, 0.5);
  const SurfacePolygon b = axis_rect(1.5, 0.5, 0.5, 0.5);
  // Centroids 1.0 m apart, shared corners at distance 0.
  CHECK(polygons_associated(a, b));
  CHECK(polygons_associated(b, a));
}

TEST_CASE("polygons_associated: close centroids but distant corners do not associate") {
  const SurfacePolygon a = axis_rect(0, 0, 0.1, 0.1);
  const SurfacePolygon b = axis_rect(1.0, 0, 0.1, 0.1);
  // Centroid rule passes (1.0 <= 1.3) but the nearest corners are 0.8 m apart.
  CHECK_FALSE(polygons_associated(a, b));
}

TEST_CASE("polygons_associated is symmetric") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const SurfacePolygon a = random_rect(rng);
    const SurfacePolygon b = random_rect(rng);
    CHECK(polygons_associated(a, b) == polygons_associated(b, a));
  }
}

TEST_CASE("dictionary_update basics") {
  PolygonDictionary dict;

  SUBCASE("empty dictionary accepts any polygon") {
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.5));
    CHECK(dict.entries.size() == 1);
    CHECK(dict.entries.begin()->first == 1);
  }

  SUBCASE("larger associated polygon replaces, keeping the id") {
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.5));     // 1 m^2
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.6));     // 1.2 m^2
    REQUIRE(dict.entries.size() == 1);
    CHECK(dict.entries.begin()->first == 1);
    CHECK(dict.entries.begin()->second.area == doctest::Approx(1.2));
  }

  SUBCASE("smaller associated polygon never replaces") {
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.6));     // 1.2 m^2
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.5));     // 1.0 m^2
    REQUIRE(dict.entries.size() == 1);
    CHECK(dict.entries.begin()->second.area == doctest::Approx(1.2));
  }

  SUBCASE("non-associated polygon gets a fresh id; ids are never reused") {
    dict = dictionary_update(dict, axis_rect(0, 0, 0.5, 0.5));
    dict = dictionary_update(dict, axis_rect(3, 0, 0.5, 0.5));
    CHECK(dict.entries.count(1) == 1);
    CHECK(dict.entries.count(2) == 1);
    CHECK(dict.next_id == 3);
  }
}

TEST_CASE("dictionary_update is idempotent for a repeated candidate") {
  PolygonDictionary dict;
  const SurfacePolygon square = axis_rect(0.3, -0.2, 0.4, 0.4);
  dict = dictionary_update(dict, square);
  const PolygonDictionary again = dictionary_update(dict, square);
  REQUIRE(again.entries.size() == dict.entries.size());
  CHECK(again.entries.begin()->second.area == dict.entries.begin()->second.area);
  CHECK(again.next_id == dict.next_id);
}

TEST_CASE("dictionary_update rejects invalid candidates") {
  PolygonDictionary dict;
  SurfacePolygon broken = axis_rect(0, 0, 0.5, 0.5);
  broken.area = 99.0;  // no longer the shoelace area
  CHECK_THROWS_AS(dictionary_update(dict, broken), std::invalid_argument);
}

TEST_CASE("dictionary entries stay mutually non-associated") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    PolygonDictionary dict;
    for (int k = 0; k < 25; ++k) dict = dictionary_update(dict, random_rect(rng));
    for (auto a = dict.entries.begin(); a != dict.entries.end(); ++a) {
      for (auto b = std::next(a); b != dict.entries.end(); ++b) {
        CHECK_FALSE(polygons_associated(a->second, b->second));
      }
    }
  }
}

TEST_CASE("plan_base_path: start equals goal") {
  const OccupancyGrid grid = OccupancyGrid::uniform(10, 10, 0.1);
  const Pose2D start = grid.center_of(4, 7, 0.3);
  const auto path = plan_base_path(grid, start, start);
  REQUIRE(path.size() == 1);
  CHECK(path[0].x == doctest::Approx(start.x));
  CHECK(path[0].y == doctest::Approx(start.y));
}

TEST_CASE("plan_base_path: empty grid diagonal costs 9*sqrt(2)*resolution") {
  const OccupancyGrid grid = OccupancyGrid::uniform(10, 10, 0.1);
  const auto path = plan_base_path(grid, grid.center_of(0, 0), grid.center_of(9, 9));
  REQUIRE(path.size() == 10);
  CHECK(path_cost(path, grid.resolution) == doctest::Approx(9.0 * std::sqrt(2.0) * 0.1));
}

TEST_CASE("plan_base_path: wall with one gap matches the Dijkstra oracle") {
  OccupancyGrid grid = OccupancyGrid::uniform(20, 20, 0.05);
  for (int cy = 0; cy < 20; ++cy) {
    if (cy != 13) grid.at(10, cy) = Cell::Occupied;
  }
  const auto path = plan_base_path(grid, grid.center_of(2, 2), grid.center_of(18, 4));
  REQUIRE_FALSE(path.empty());
  const auto oracle = oracles::dijkstra_cost(grid, {2, 2}, {18, 4});
  REQUIRE(oracle.has_value());
  CHECK(path_cost(path, grid.resolution) == *oracle);
}

TEST_CASE("plan_base_path errors on bad endpoints") {
  OccupancyGrid grid = OccupancyGrid::uniform(10, 10, 0.1);
  grid.at(5, 5) = Cell::Occupied;
  CHECK_THROWS_AS(plan_base_path(grid, {5.0, 5.0}, {0.05, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS(plan_base_path(grid, grid.center_of(5, 5), grid.center_of(0, 0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(plan_base_path(grid, grid.center_of(0, 0), grid.center_of(5, 5)),
                  std::invalid_argument);
}

TEST_CASE("plan_base_path: unreachable goal returns an empty path") {
  OccupancyGrid grid = OccupancyGrid::uniform(10, 10, 0.1);
  for (int cy = 0; cy < 10; ++cy) grid.at(5, cy) = Cell::Occupied;
  const auto path = plan_base_path(grid, grid.center_of(1, 1), grid.center_of(8, 8));
  CHECK(path.empty());
}

TEST_CASE("A* cost equals Dijkstra on 1000 random grids") {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const OccupancyGrid grid = random_grid(rng, 15, 15, 0.07, 0.25);
    // Draw free start/goal cells.
    Eigen::Vector2i s(-1, -1), g(-1, -1);
    for (int attempt = 0; attempt < 200 && (s.x() < 0 || g.x() < 0); ++attempt) {
      const int x = static_cast<int>(uniform_index(rng, 15));
      const int y = static_cast<int>(uniform_index(rng, 15));
      if (grid.at(x, y) != Cell::Free) continue;
      if (s.x() < 0) {
        s = {x, y};
      } else {
        g = {x, y};
      }
    }
    if (s.x() < 0 || g.x() < 0) continue;

    const auto path = plan_base_path(grid, grid.center_of(s.x(), s.y()),
                                     grid.center_of(g.x(), g.y()));
    const auto oracle = oracles::dijkstra_cost(grid, s, g);
    if (path.empty()) {
      CHECK_FALSE(oracle.has_value());
    } else {
      REQUIRE(oracle.has_value());
      CHECK(path_cost(path, grid.resolution) == *oracle);
      ++compared;
    }
  }
  CHECK(compared > 500);  // most random instances must actually be solvable
}

TEST_CASE("make_polygon rejects degenerate input") {
  Matrix3Xd line(3, 3);
  line.col(0) = Vector3d(0, 0, 0);
  line.col(1) = Vector3d(1, 0, 0);
  line.col(2) = Vector3d(2, 0, 0);
  CHECK_THROWS_AS(make_polygon(line), std::invalid_argument);
}

TEST_CASE("bounding rectangle of a rectangle is itself") {
  const SurfacePolygon rect = axis_rect(1.0, 2.0, 0.5, 0.25, 0.7);
  const Matrix3Xd corners = bounding_rectangle_corners(rect);
  // Every polygon vertex must coincide with some rectangle corner.
  for (Eigen::Index i = 0; i < 4; ++i) {
    double best = 1e9;
    for (Eigen::Index j = 0; j < 4; ++j) {
      best = std::min(best, (rect.vertices.col(i) - corners.col(j)).norm());
    }
    CHECK(best < 1e-9);
  }
}
