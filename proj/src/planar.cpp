#include "uvplan/planar.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace uvplan {

namespace {

double cross2(const Vector2d& o, const Vector2d& a, const Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

Matrix2Xd convex_hull(const Matrix2Xd& points) {
  const Eigen::Index n = points.cols();
  std::vector<Vector2d> pts(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) pts[static_cast<size_t>(i)] = points.col(i);
  std::sort(pts.begin(), pts.end(), [](const Vector2d& a, const Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vector2d& a, const Vector2d& b) { return a == b; }),
            pts.end());

  const size_t m = pts.size();
  if (m <= 2) {
    Matrix2Xd out(2, static_cast<Eigen::Index>(m));
    for (size_t i = 0; i < m; ++i) out.col(static_cast<Eigen::Index>(i)) = pts[i];
    return out;
  }

  std::vector<Vector2d> hull(2 * m);
  size_t k = 0;
  for (size_t i = 0; i < m; ++i) {  // lower chain
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = m - 1, t = k + 1; i-- > 0;) {  // upper chain
    while (k >= t && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);  // last point repeats the first

  Matrix2Xd out(2, static_cast<Eigen::Index>(hull.size()));
  for (size_t i = 0; i < hull.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = hull[i];
  return out;
}

double polygon_area(const Matrix2Xd& vertices) {
  const Eigen::Index n = vertices.cols();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector2d& a = vertices.col(i);
    const Vector2d& b = vertices.col((i + 1) % n);
    twice += a.x() * b.y() - b.x() * a.y();
  }
  return std::abs(twice) / 2.0;
}

Matrix2Xd RotatedRect::corners() const {
  const Vector2d axis_v(-axis_u.y(), axis_u.x());
  Matrix2Xd c(2, 4);
  c.col(0) = center - half_u * axis_u - half_v * axis_v;
  c.col(1) = center + half_u * axis_u - half_v * axis_v;
  c.col(2) = center + half_u * axis_u + half_v * axis_v;
  c.col(3) = center - half_u * axis_u + half_v * axis_v;
  return c;
}

RotatedRect min_area_rect(const Matrix2Xd& points) {
  const Matrix2Xd hull = convex_hull(points);
  const Eigen::Index h = hull.cols();

  if (h == 0) return {};
  if (h == 1) return {hull.col(0), Vector2d::UnitX(), 0.0, 0.0};
  if (h == 2) {
    const Vector2d d = hull.col(1) - hull.col(0);
    return {0.5 * (hull.col(0) + hull.col(1)), d.normalized(), d.norm() / 2.0, 0.0};
  }

  RotatedRect best;
  double best_area = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < h; ++i) {
    Vector2d e = hull.col((i + 1) % h) - hull.col(i);
    const double len = e.norm();
    if (len < 1e-15) continue;
    e /= len;
    const Vector2d perp(-e.y(), e.x());

    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (Eigen::Index j = 0; j < h; ++j) {
      const double pu = e.dot(hull.col(j));
      const double pv = perp.dot(hull.col(j));
      umin = std::min(umin, pu);
      umax = std::max(umax, pu);
      vmin = std::min(vmin, pv);
      vmax = std::max(vmax, pv);
    }
    const double area = (umax - umin) * (vmax - vmin);
    if (area < best_area) {
      best_area = area;
      best.axis_u = e;
      best.half_u = (umax - umin) / 2.0;
      best.half_v = (vmax - vmin) / 2.0;
      best.center = 0.5 * (umin + umax) * e + 0.5 * (vmin + vmax) * perp;
    }
  }
  return best;
}

PlaneBasis plane_basis(const Vector3d& origin, const Vector3d& unit_normal) {
  PlaneBasis basis;
  basis.origin = origin;
  basis.normal = unit_normal;
  int least = 0;
  unit_normal.cwiseAbs().minCoeff(&least);
  Vector3d seed = Vector3d::Unit(least);
  basis.u = (seed - seed.dot(unit_normal) * unit_normal).normalized();
  basis.v = unit_normal.cross(basis.u);
  return basis;
}

}  // namespace uvplan
