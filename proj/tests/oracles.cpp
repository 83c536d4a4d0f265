#include "oracles.hpp"

#include "uvplan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>

namespace oracles {

using namespace uvplan;

std::optional<double> dijkstra_cost(const OccupancyGrid& grid, const Eigen::Vector2i& start,
                                    const Eigen::Vector2i& goal) {
  const int n = grid.width * grid.height;
  const int s = start.y() * grid.width + start.x();
  const int g = goal.y() * grid.width + goal.x();
  const double res = grid.resolution;
  const double diag = std::sqrt(2.0) * res;

  std::vector<double> dist(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> parent(static_cast<size_t>(n), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[static_cast<size_t>(s)] = 0.0;
  queue.push({0.0, s});

  const int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  const int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[static_cast<size_t>(u)]) continue;
    const int ux = u % grid.width, uy = u / grid.width;
    for (int k = 0; k < 8; ++k) {
      const int vx = ux + dx[k], vy = uy + dy[k];
      if (!grid.in_bounds(vx, vy) || grid.at(vx, vy) != Cell::Free) continue;
      const int v = vy * grid.width + vx;
      const double cand = d + (k < 4 ? res : diag);
      if (cand < dist[static_cast<size_t>(v)]) {
        dist[static_cast<size_t>(v)] = cand;
        parent[static_cast<size_t>(v)] = u;
        queue.push({cand, v});
      }
    }
  }

  if (s != g && parent[static_cast<size_t>(g)] < 0) return std::nullopt;

  long straight = 0, diagonal = 0;
  for (int v = g; v != s; v = parent[static_cast<size_t>(v)]) {
    const int p = parent[static_cast<size_t>(v)];
    const int ddx = std::abs(v % grid.width - p % grid.width);
    const int ddy = std::abs(v / grid.width - p / grid.width);
    if (ddx + ddy == 2) {
      ++diagonal;
    } else {
      ++straight;
    }
  }
  return static_cast<double>(straight) * res + static_cast<double>(diagonal) * (std::sqrt(2.0) * res);
}

double min_rect_area_sweep(const Matrix2Xd& points, double step_deg) {
  double best = std::numeric_limits<double>::infinity();
  for (double deg = 0.0; deg < 90.0; deg += step_deg) {
    const double rad = deg * kPi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    double umin = std::numeric_limits<double>::infinity(), umax = -umin;
    double vmin = umin, vmax = -umin;
    for (Eigen::Index i = 0; i < points.cols(); ++i) {
      const double u = c * points(0, i) + s * points(1, i);
      const double v = -s * points(0, i) + c * points(1, i);
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    best = std::min(best, (umax - umin) * (vmax - vmin));
  }
  return best;
}

long voxel_count(const Matrix3Xd& points, double voxel) {
  std::unordered_set<std::string> keys;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const auto k = std::to_string(static_cast<long long>(std::floor(points(0, i) / voxel))) + "," +
                   std::to_string(static_cast<long long>(std::floor(points(1, i) / voxel))) + "," +
                   std::to_string(static_cast<long long>(std::floor(points(2, i) / voxel)));
    keys.insert(k);
  }
  return static_cast<long>(keys.size());
}

namespace {

// Same edge-summation order as the library so identical tours give identical
// doubles; the enumeration and filtering around it are independent.
ObjectiveVector canonical_objectives(const MotspInstance& inst, std::vector<int> order) {
  const size_t n = order.size();
  const auto zero = std::find(order.begin(), order.end(), 0);
  std::rotate(order.begin(), zero, order.end());
  if (n > 2 && order[1] > order[n - 1]) {
    std::reverse(order.begin() + 1, order.end());
  }
  ObjectiveVector obj;
  for (size_t i = 0; i + 1 < n; ++i) {
    obj.f1 += (inst.coords1.col(order[i]) - inst.coords1.col(order[i + 1])).norm();
    obj.f2 += (inst.coords2.col(order[i]) - inst.coords2.col(order[i + 1])).norm();
  }
  obj.f1 += (inst.coords1.col(order[n - 1]) - inst.coords1.col(order[0])).norm();
  obj.f2 += (inst.coords2.col(order[n - 1]) - inst.coords2.col(order[0])).norm();
  return obj;
}

}  // namespace

std::vector<ObjectiveVector> pareto_objectives(const MotspInstance& inst) {
  const int n = static_cast<int>(inst.size());
  std::vector<ObjectiveVector> all;

  if (n == 1) {
    all.push_back({0.0, 0.0});
  } else {
    // Fix the LAST city (n-1) and permute the rest; reflections enumerate
    // twice, which the filter absorbs.
    std::vector<int> head(static_cast<size_t>(n - 1));
    std::iota(head.begin(), head.end(), 0);
    do {
      std::vector<int> order = head;
      order.push_back(n - 1);
      all.push_back(canonical_objectives(inst, std::move(order)));
    } while (std::next_permutation(head.begin(), head.end()));
  }

  std::sort(all.begin(), all.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) {
    return a.f1 < b.f1 || (a.f1 == b.f1 && a.f2 < b.f2);
  });
  std::vector<ObjectiveVector> front;
  double best_f2 = std::numeric_limits<double>::infinity();
  for (const ObjectiveVector& obj : all) {
    if (obj.f2 < best_f2) {
      front.push_back(obj);
      best_f2 = obj.f2;
    }
  }
  return front;
}

double mc_hypervolume(const ParetoFront& front, const ObjectiveVector& reference, long samples,
                      std::uint64_t seed) {
  if (front.members.empty()) return 0.0;
  double f1_lo = std::numeric_limits<double>::infinity(), f2_lo = f1_lo;
  for (const auto& m : front.members) {
    f1_lo = std::min(f1_lo, m.objectives.f1);
    f2_lo = std::min(f2_lo, m.objectives.f2);
  }
  std::mt19937_64 rng(seed);
  long hits = 0;
  for (long i = 0; i < samples; ++i) {
    const double q1 = uniform_range(rng, f1_lo, reference.f1);
    const double q2 = uniform_range(rng, f2_lo, reference.f2);
    for (const auto& m : front.members) {
      if (m.objectives.f1 <= q1 && m.objectives.f2 <= q2) {
        ++hits;
        break;
      }
    }
  }
  const double box = (reference.f1 - f1_lo) * (reference.f2 - f2_lo);
  return box * static_cast<double>(hits) / static_cast<double>(samples);
}

double panel_hemisphere_power(const LedPanelSource& panel, double radius, int n_theta,
                              int n_phi) {
  const Vector3d center = panel.pose.position;
  double power = 0.0;
  for (int it = 0; it < n_theta; ++it) {
    const double theta = (it + 0.5) / n_theta * (kPi / 2.0);
    const double solid = std::sin(theta) * (kPi / 2.0 / n_theta) * (2.0 * kPi / n_phi);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = (ip + 0.5) / n_phi * 2.0 * kPi;
      const Vector3d dir =
          panel.pose.orientation *
          Vector3d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                   std::cos(theta));
      const SurfaceSample sample{center + radius * dir, -dir};
      power += irradiance_panel(panel, sample) * solid * radius * radius;
    }
  }
  return power;
}

}  // namespace oracles
