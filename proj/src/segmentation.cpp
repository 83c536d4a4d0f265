#include "uvplan/segmentation.hpp"

#include "uvplan/planar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace uvplan {

PointCloud preprocess(const PointCloud& cloud, double max_range) {
  if (max_range <= 0.0) throw std::invalid_argument("preprocess: max_range must be positive");

  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<size_t>(cloud.size()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    if (cloud.points.col(i).norm() <= max_range) keep.push_back(i);
  }

  PointCloud out;
  out.frame = "map";
  out.sensor_pose = cloud.sensor_pose;
  out.points.resize(3, static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    out.points.col(static_cast<Eigen::Index>(i)) = cloud.sensor_pose * cloud.points.col(keep[i]);
  }
  return out;
}

PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
  if (voxel <= 0.0) throw std::invalid_argument("voxel_downsample: voxel size must be positive");

  using Key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;
  struct Accum {
    Vector3d sum = Vector3d::Zero();
    std::int64_t count = 0;
  };
  std::map<Key, Accum> bins;
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    const Vector3d p = cloud.points.col(i);
    const Key key{static_cast<std::int64_t>(std::floor(p.x() / voxel)),
                  static_cast<std::int64_t>(std::floor(p.y() / voxel)),
                  static_cast<std::int64_t>(std::floor(p.z() / voxel))};
    Accum& acc = bins[key];
    acc.sum += p;
    acc.count += 1;
  }

  PointCloud out;
  out.frame = cloud.frame;
  out.sensor_pose = cloud.sensor_pose;
  out.points.resize(3, static_cast<Eigen::Index>(bins.size()));
  Eigen::Index col = 0;
  for (const auto& [key, acc] : bins) {
    out.points.col(col++) = acc.sum / static_cast<double>(acc.count);
  }
  return out;
}

PointCloud remove_ground(const PointCloud& cloud, double z_max) {
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<size_t>(cloud.size()));
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    if (cloud.points(2, i) > z_max) keep.push_back(i);
  }
  PointCloud out;
  out.frame = cloud.frame;
  out.sensor_pose = cloud.sensor_pose;
  out.points.resize(3, static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    out.points.col(static_cast<Eigen::Index>(i)) = cloud.points.col(keep[i]);
  }
  return out;
}

namespace {

struct NormalEstimate {
  Vector3d normal = Vector3d::Zero();
  bool valid = false;
};

// Principal-axis normal of the (k+1)-point neighborhood (the point plus its
// k nearest neighbors). A neighborhood counts as plane-like only when the
// smallest/middle eigenvalue ratio stays below the configured cap.
std::vector<NormalEstimate> estimate_normals(const Matrix3Xd& pts,
                                             const std::vector<std::vector<int>>& knn,
                                             double ratio_max) {
  const Eigen::Index n = pts.cols();
  std::vector<NormalEstimate> normals(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& nbrs = knn[static_cast<size_t>(i)];
    Vector3d mean = pts.col(i);
    for (int j : nbrs) mean += pts.col(j);
    mean /= static_cast<double>(nbrs.size() + 1);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    {
      const Vector3d d = pts.col(i) - mean;
      cov += d * d.transpose();
    }
    for (int j : nbrs) {
      const Vector3d d = pts.col(j) - mean;
      cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size() + 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Vector3d evals = solver.eigenvalues();  // ascending
    if (evals(1) <= 0.0 || evals(0) / evals(1) > ratio_max) continue;
    NormalEstimate& est = normals[static_cast<size_t>(i)];
    est.normal = solver.eigenvectors().col(0);
    est.valid = true;
  }
  return normals;
}

// Directed k-nearest-neighbor lists (normal estimation must use exactly the
// k nearest points, not the symmetric closure).
std::vector<std::vector<int>> knn_lists(const Matrix3Xd& pts, int k) {
  const Eigen::Index n = pts.cols();
  std::vector<std::vector<int>> knn(static_cast<size_t>(n));
  std::vector<std::pair<double, int>> dist(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd d2 = (pts.colwise() - pts.col(i)).colwise().squaredNorm();
    for (Eigen::Index j = 0; j < n; ++j) dist[static_cast<size_t>(j)] = {d2(j), static_cast<int>(j)};
    dist[static_cast<size_t>(i)].first = std::numeric_limits<double>::infinity();  // exclude self
    const size_t kk = std::min<size_t>(static_cast<size_t>(k), static_cast<size_t>(n - 1));
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(kk), dist.end());
    auto& out = knn[static_cast<size_t>(i)];
    out.reserve(kk);
    for (size_t j = 0; j < kk; ++j) out.push_back(dist[j].second);
  }
  return knn;
}

// Symmetric closure so region growing can cross edges in either direction.
std::vector<std::vector<int>> symmetrize(const std::vector<std::vector<int>>& knn) {
  std::vector<std::vector<int>> sym(knn.size());
  for (size_t i = 0; i < knn.size(); ++i) {
    for (int j : knn[i]) {
      sym[i].push_back(j);
      sym[static_cast<size_t>(j)].push_back(static_cast<int>(i));
    }
  }
  for (auto& nbrs : sym) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
  return sym;
}

struct FitPlane {
  Vector3d normal = Vector3d::UnitZ();
  Vector3d centroid = Vector3d::Zero();
  bool ok = false;
};

FitPlane pca_plane(const Matrix3Xd& pts, const std::vector<int>& members) {
  FitPlane fit;
  if (members.size() < 3) return fit;
  Vector3d mean = Vector3d::Zero();
  for (int m : members) mean += pts.col(m);
  mean /= static_cast<double>(members.size());
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int m : members) {
    const Vector3d d = pts.col(m) - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  if (solver.eigenvalues()(1) <= 1e-18) return fit;  // collinear
  fit.normal = solver.eigenvectors().col(0);
  fit.centroid = mean;
  fit.ok = true;
  return fit;
}

// Sign convention: largest-magnitude component positive.
Vector3d canonical_sign(Vector3d n) {
  int idx = 0;
  n.cwiseAbs().maxCoeff(&idx);
  return n(idx) < 0.0 ? Vector3d(-n) : n;
}

}  // namespace

std::vector<PlaneSegment> segment_planes(const PointCloud& cloud,
                                         const SegmentationParams& params) {
  if (params.distance_threshold <= 0.0 || params.angle_threshold <= 0.0) {
    throw std::invalid_argument("segment_planes: thresholds must be positive");
  }
  const Eigen::Index n = cloud.size();
  if (n == 0) throw std::invalid_argument("segment_planes: empty cloud");
  if (n <= params.k_neighbors) {
    throw std::invalid_argument("segment_planes: cloud smaller than neighborhood size");
  }

  // Canonical point order makes the partition independent of input order.
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const Vector3d pa = cloud.points.col(a), pb = cloud.points.col(b);
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    return pa.z() < pb.z();
  });
  Matrix3Xd pts(3, n);
  for (Eigen::Index i = 0; i < n; ++i) pts.col(i) = cloud.points.col(order[static_cast<size_t>(i)]);

  const auto knn = knn_lists(pts, params.k_neighbors);
  const auto graph = symmetrize(knn);
  const auto normals = estimate_normals(pts, knn, params.planarity_ratio_max);
  const double cos_thresh = std::cos(params.angle_threshold);

  std::vector<bool> claimed(static_cast<size_t>(n), false);
  std::vector<bool> dead_seed(static_cast<size_t>(n), false);
  std::vector<PlaneSegment> segments;

  for (Eigen::Index seed = 0; seed < n; ++seed) {
    const size_t si = static_cast<size_t>(seed);
    if (claimed[si] || dead_seed[si] || !normals[si].valid) continue;

    const Vector3d seed_normal = normals[si].normal;
    const Vector3d seed_point = pts.col(seed);

    // Grow along the k-NN graph against the seed plane.
    std::vector<int> members{static_cast<int>(seed)};
    std::vector<bool> in_region(static_cast<size_t>(n), false);
    in_region[si] = true;
    for (size_t head = 0; head < members.size(); ++head) {
      for (int nb : graph[static_cast<size_t>(members[head])]) {
        const size_t nbi = static_cast<size_t>(nb);
        if (in_region[nbi] || claimed[nbi] || !normals[nbi].valid) continue;
        const double dist = std::abs(seed_normal.dot(pts.col(nb) - seed_point));
        if (dist > params.distance_threshold) continue;
        if (std::abs(seed_normal.dot(normals[nbi].normal)) < cos_thresh) continue;
        in_region[nbi] = true;
        members.push_back(nb);
      }
    }

    if (static_cast<int>(members.size()) < params.min_inliers) {
      dead_seed[si] = true;
      continue;
    }

    // Refit and trim until every member honors the distance threshold.
    FitPlane fit;
    while (true) {
      fit = pca_plane(pts, members);
      if (!fit.ok) break;
      std::vector<int> kept;
      kept.reserve(members.size());
      for (int m : members) {
        if (std::abs(fit.normal.dot(pts.col(m) - fit.centroid)) <= params.distance_threshold) {
          kept.push_back(m);
        }
      }
      if (kept.size() == members.size()) break;
      members.swap(kept);
      if (members.size() < 3) break;
    }

    if (!fit.ok || static_cast<int>(members.size()) < params.min_inliers) {
      dead_seed[si] = true;  // shrunk away; let other seeds reclaim the points
      continue;
    }

    std::sort(members.begin(), members.end());
    PlaneSegment segment;
    segment.label = static_cast<int>(segments.size());
    const Vector3d normal = canonical_sign(fit.normal);
    segment.coefficients << normal, -normal.dot(fit.centroid);
    segment.inliers.resize(3, static_cast<Eigen::Index>(members.size()));
    for (size_t i = 0; i < members.size(); ++i) {
      segment.inliers.col(static_cast<Eigen::Index>(i)) = pts.col(members[i]);
      claimed[static_cast<size_t>(members[i])] = true;
    }
    segments.push_back(std::move(segment));
  }

  return segments;
}

SurfacePolygon fit_rectangle(const PlaneSegment& segment) {
  if (segment.inliers.cols() < 3) {
    throw std::invalid_argument("fit_rectangle: need at least 3 inliers");
  }
  const Vector3d normal = segment.coefficients.head<3>();
  const Vector3d on_plane = -segment.coefficients(3) * normal;
  const PlaneBasis basis = plane_basis(on_plane, normal);

  Matrix2Xd flat(2, segment.inliers.cols());
  for (Eigen::Index i = 0; i < segment.inliers.cols(); ++i) {
    flat.col(i) = basis.project(segment.inliers.col(i));
  }

  const RotatedRect rect = min_area_rect(flat);
  if (rect.area() <= 0.0) {
    throw std::invalid_argument("fit_rectangle: degenerate (collinear) inliers");
  }

  const Matrix2Xd corners = rect.corners();
  Matrix3Xd lifted(3, 4);
  for (Eigen::Index i = 0; i < 4; ++i) lifted.col(i) = basis.lift(corners.col(i));
  SurfacePolygon poly = make_polygon(lifted, segment.label);
  return poly;
}

}  // namespace uvplan
