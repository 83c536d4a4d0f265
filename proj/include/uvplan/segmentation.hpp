#pragma once

#include "uvplan/world.hpp"

#include <string>
#include <vector>

namespace uvplan {

struct PointCloud {
  Matrix3Xd points;
  Eigen::Isometry3d sensor_pose = Eigen::Isometry3d::Identity();  // sensor -> map
  std::string frame = "sensor";

  Eigen::Index size() const { return points.cols(); }
};

// Fitted plane with its member points (map frame). coefficients = (a,b,c,d)
// with ax + by + cz + d = 0 and |(a,b,c)| = 1; every inlier lies within the
// segmentation distance threshold of the plane.
struct PlaneSegment {
  Eigen::Vector4d coefficients = {0, 0, 1, 0};
  Matrix3Xd inliers;
  int label = 0;
};

struct SegmentationParams {
  double distance_threshold = 0.02;            // meters
  double angle_threshold = 10.0 * kPi / 180.0; // radians
  int min_inliers = 50;
  int k_neighbors = 10;
  // Neighborhoods whose smallest/middle covariance eigenvalue ratio exceeds
  // this are not plane-like and contribute no normal.
  double planarity_ratio_max = 0.1;
};

// Drops points farther than max_range from the sensor origin and transforms
// the survivors into the map frame.
PointCloud preprocess(const PointCloud& cloud, double max_range = 2.5);

// One output point per occupied voxel (the centroid of the voxel's points),
// ordered by voxel index. Throws on non-positive voxel size.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel = 0.02);

// Removes every point with z <= z_max (cloud must be in the map frame).
PointCloud remove_ground(const PointCloud& cloud, double z_max = 0.05);

// Region growing over per-point normals (principal axis of the k-NN
// covariance). Points are canonicalized by lexicographic sort first, so the
// returned partition does not depend on input point order; seeds are taken in
// ascending canonical index. Throws when the cloud has fewer points than
// k_neighbors + 1.
std::vector<PlaneSegment> segment_planes(const PointCloud& cloud,
                                         const SegmentationParams& params = {});

// Projects inliers into the segment plane, takes the convex hull and its
// minimum-area bounding rectangle (rotating calipers), returned as a 4-vertex
// polygon. Throws on degenerate (collinear) inliers.
SurfacePolygon fit_rectangle(const PlaneSegment& segment);

}  // namespace uvplan
