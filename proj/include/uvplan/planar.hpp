#pragma once

#include "uvplan/geometry.hpp"

namespace uvplan {

// Convex hull of a 2-D point set, counter-clockwise, no repeated first vertex.
// Collinear input collapses to a 2-point (or 1-point) "hull".
Matrix2Xd convex_hull(const Matrix2Xd& points);

// Shoelace area of a simple polygon given as ordered vertices (absolute value).
double polygon_area(const Matrix2Xd& vertices);

// Oriented rectangle in the plane: center, unit axis of the first side and
// half-extents along that axis and its perpendicular.
struct RotatedRect {
  Vector2d center = Vector2d::Zero();
  Vector2d axis_u = Vector2d::UnitX();
  double half_u = 0.0;
  double half_v = 0.0;

  double area() const { return 4.0 * half_u * half_v; }
  // Corners in counter-clockwise order.
  Matrix2Xd corners() const;
};

// Minimum-area bounding rectangle of a point set (rotating calipers over hull
// edges; the optimal rectangle has a side collinear with a hull edge).
// Collinear input yields a degenerate rectangle with half_v == 0.
RotatedRect min_area_rect(const Matrix2Xd& points);

// Orthonormal in-plane frame for projecting 3-D points to plane coordinates.
struct PlaneBasis {
  Vector3d origin = Vector3d::Zero();
  Vector3d u = Vector3d::UnitX();
  Vector3d v = Vector3d::UnitY();
  Vector3d normal = Vector3d::UnitZ();

  Vector2d project(const Vector3d& p) const {
    Vector3d d = p - origin;
    return {u.dot(d), v.dot(d)};
  }
  Vector3d lift(const Vector2d& q) const { return origin + q.x() * u + q.y() * v; }
};

// Deterministic basis: u is the normalized projection of the global axis
// least aligned with the normal.
PlaneBasis plane_basis(const Vector3d& origin, const Vector3d& unit_normal);

}  // namespace uvplan
