#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace uvplan {

using Eigen::Matrix2Xd;
using Eigen::Matrix3Xd;
using Eigen::Quaterniond;
using Eigen::Vector2d;
using Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;

// Wraps an angle to (-pi, pi].
inline double normalize_angle(double theta) {
  double t = std::fmod(theta + kPi, 2.0 * kPi);
  if (t <= 0.0) t += 2.0 * kPi;
  return t - kPi;
}

// Planar base pose on the occupancy grid.
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose2D() = default;
  Pose2D(double x_, double y_, double theta_ = 0.0)
      : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vector2d translation() const { return {x, y}; }
};

// Rigid transform. The emitter optical axis is local +z.
struct Pose3D {
  Vector3d position = Vector3d::Zero();
  Quaterniond orientation = Quaterniond::Identity();

  Vector3d axis() const { return orientation * Vector3d::UnitZ(); }
  Vector3d apply(const Vector3d& p) const { return position + orientation * p; }

  // this * local (apply `local` in this frame).
  Pose3D compose(const Pose3D& local) const {
    return {position + orientation * local.position,
            (orientation * local.orientation).normalized()};
  }
};

// Linear position blend, spherical orientation blend, s in [0, 1].
inline Pose3D interpolate(const Pose3D& a, const Pose3D& b, double s) {
  return {(1.0 - s) * a.position + s * b.position, a.orientation.slerp(s, b.orientation)};
}

// Orientation with +z along `facing` and +x along `lateral` (orthonormalized
// against facing). Throws if the two directions are parallel.
inline Quaterniond look_orientation(const Vector3d& facing, const Vector3d& lateral) {
  Vector3d z = facing.normalized();
  Vector3d x = lateral - lateral.dot(z) * z;
  if (x.norm() < 1e-12) {
    throw std::invalid_argument("look_orientation: lateral direction parallel to facing");
  }
  x.normalize();
  Vector3d y = z.cross(x);
  Eigen::Matrix3d rot;
  rot.col(0) = x;
  rot.col(1) = y;
  rot.col(2) = z;
  return Quaterniond(rot).normalized();
}

}  // namespace uvplan
