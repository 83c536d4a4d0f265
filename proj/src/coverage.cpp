#include "uvplan/coverage.hpp"

#include "uvplan/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace uvplan {

void MotspInstance::validate() const {
  if (coords1.cols() < 1) throw std::invalid_argument("MotspInstance: need at least one city");
  if (coords1.cols() != coords2.cols()) {
    throw std::invalid_argument("MotspInstance: embeddings must have the same city count");
  }
  if (!coords1.allFinite() || !coords2.allFinite()) {
    throw std::invalid_argument("MotspInstance: coordinates must be finite");
  }
}

namespace {

void check_tour(const MotspInstance& inst, const Tour& tour) {
  const size_t n = static_cast<size_t>(inst.size());
  if (tour.order.size() != n) throw std::invalid_argument("tour size mismatch");
  std::vector<bool> seen(n, false);
  for (int city : tour.order) {
    if (city < 0 || static_cast<size_t>(city) >= n || seen[static_cast<size_t>(city)]) {
      throw std::invalid_argument("tour is not a permutation");
    }
    seen[static_cast<size_t>(city)] = true;
  }
}

double closed_length(const Matrix2Xd& coords, const std::vector<int>& order) {
  const size_t n = order.size();
  double total = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    total += (coords.col(order[i]) - coords.col(order[i + 1])).norm();
  }
  total += (coords.col(order[n - 1]) - coords.col(order[0])).norm();
  return total;
}

Eigen::MatrixXd distance_matrix(const Matrix2Xd& coords) {
  const Eigen::Index n = coords.cols();
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d.col(i) = (coords.colwise() - coords.col(i)).colwise().norm().transpose();
  }
  return d;
}

}  // namespace

ObjectiveVector tour_objectives(const MotspInstance& inst, const Tour& tour) {
  inst.validate();
  check_tour(inst, tour);
  return {closed_length(inst.coords1, tour.order), closed_length(inst.coords2, tour.order)};
}

ParetoFront pareto_filter(std::vector<ParetoFront::Member> members) {
  // Deterministic ties: duplicates keep the lexicographically smallest order.
  std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
    if (a.objectives.f1 != b.objectives.f1) return a.objectives.f1 < b.objectives.f1;
    if (a.objectives.f2 != b.objectives.f2) return a.objectives.f2 < b.objectives.f2;
    return a.tour.order < b.tour.order;
  });
  members.erase(std::unique(members.begin(), members.end(),
                            [](const auto& a, const auto& b) {
                              return a.objectives.f1 == b.objectives.f1 &&
                                     a.objectives.f2 == b.objectives.f2;
                            }),
                members.end());

  ParetoFront front;
  for (const auto& m : members) {
    bool dominated = false;
    for (const auto& other : members) {
      if (&other == &m) continue;
      if (dominates(other.objectives, m.objectives)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.members.push_back(m);
  }
  return front;  // already sorted ascending by f1
}

ParetoFront brute_force_pareto(const MotspInstance& inst) {
  inst.validate();
  const int n = static_cast<int>(inst.size());
  if (n > 10) throw std::invalid_argument("brute_force_pareto: instance too large (n > 10)");

  std::vector<ParetoFront::Member> members;
  std::vector<int> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  if (n <= 3) {
    members.push_back({Tour{order}, tour_objectives(inst, Tour{order})});
    return pareto_filter(std::move(members));
  }

  // City 0 fixed first, canonical direction order[1] < order[n-1]: (n-1)!/2
  // distinct closed tours.
  std::vector<int> tail(order.begin() + 1, order.end());
  do {
    if (tail.front() > tail.back()) continue;
    std::vector<int> full{0};
    full.insert(full.end(), tail.begin(), tail.end());
    Tour tour{std::move(full)};
    ObjectiveVector obj = tour_objectives(inst, tour);
    members.push_back({std::move(tour), obj});
  } while (std::next_permutation(tail.begin(), tail.end()));

  return pareto_filter(std::move(members));
}

Tour scalarized_optimal(const MotspInstance& inst, double lambda) {
  inst.validate();
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("scalarized_optimal: lambda must lie in [0, 1]");
  }
  const int n = static_cast<int>(inst.size());
  if (n > 13) throw std::invalid_argument("scalarized_optimal: instance too large (n > 13)");
  if (n == 1) return Tour{{0}};

  const Eigen::MatrixXd w =
      lambda * distance_matrix(inst.coords1) + (1.0 - lambda) * distance_matrix(inst.coords2);

  const int m = n - 1;  // cities 1..n-1
  const size_t n_masks = size_t{1} << m;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dp(n_masks * static_cast<size_t>(m), kInf);
  std::vector<int> parent(n_masks * static_cast<size_t>(m), -1);
  auto at = [m](size_t mask, int last) { return mask * static_cast<size_t>(m) + last; };

  for (int i = 0; i < m; ++i) dp[at(size_t{1} << i, i)] = w(0, i + 1);

  for (size_t mask = 1; mask < n_masks; ++mask) {
    for (int last = 0; last < m; ++last) {
      if (!(mask & (size_t{1} << last))) continue;
      const double base = dp[at(mask, last)];
      if (base == kInf) continue;
      for (int next = 0; next < m; ++next) {
        if (mask & (size_t{1} << next)) continue;
        const size_t nmask = mask | (size_t{1} << next);
        const double cand = base + w(last + 1, next + 1);
        if (cand < dp[at(nmask, next)]) {
          dp[at(nmask, next)] = cand;
          parent[at(nmask, next)] = last;
        }
      }
    }
  }

  const size_t full = n_masks - 1;
  double best = kInf;
  int best_last = 0;
  for (int last = 0; last < m; ++last) {
    const double cand = dp[at(full, last)] + w(last + 1, 0);
    if (cand < best) {
      best = cand;
      best_last = last;
    }
  }

  std::vector<int> reversed;
  size_t mask = full;
  int last = best_last;
  while (last >= 0) {
    reversed.push_back(last + 1);
    const int prev = parent[at(mask, last)];
    mask &= ~(size_t{1} << last);
    last = prev;
  }
  std::vector<int> order{0};
  order.insert(order.end(), reversed.rbegin(), reversed.rend());
  return Tour{std::move(order)};
}

namespace {

Tour nearest_neighbor_tour(const Eigen::MatrixXd& w, int start) {
  const int n = static_cast<int>(w.rows());
  std::vector<int> order;
  order.reserve(static_cast<size_t>(n));
  std::vector<bool> visited(static_cast<size_t>(n), false);
  int current = start;
  order.push_back(current);
  visited[static_cast<size_t>(current)] = true;
  for (int step = 1; step < n; ++step) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int next = 0; next < n; ++next) {
      if (visited[static_cast<size_t>(next)]) continue;
      if (w(current, next) < best_dist) {
        best_dist = w(current, next);
        best = next;
      }
    }
    order.push_back(best);
    visited[static_cast<size_t>(best)] = true;
    current = best;
  }
  return Tour{std::move(order)};
}

// First-improvement 2-opt on precomputed weights. Every accepted swap
// strictly decreases the scalarized cost; passes repeat until one full scan
// finds no improving move.
TwoOptStats two_opt(const Eigen::MatrixXd& w, Tour& tour) {
  constexpr double kGain = 1e-12;
  const int n = static_cast<int>(tour.order.size());
  TwoOptStats stats;
  if (n < 4) {
    stats.passes = 1;
    return stats;
  }
  auto& t = tour.order;
  bool improved = true;
  while (improved) {
    improved = false;
    ++stats.passes;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;  // same edge pair
        const int a = t[static_cast<size_t>(i)];
        const int b = t[static_cast<size_t>(i + 1)];
        const int c = t[static_cast<size_t>(j)];
        const int d = t[static_cast<size_t>((j + 1) % n)];
        const double delta = w(a, c) + w(b, d) - w(a, b) - w(c, d);
        if (delta < -kGain) {
          std::reverse(t.begin() + i + 1, t.begin() + j + 1);
          ++stats.swaps;
          improved = true;
        }
      }
    }
  }
  return stats;
}

}  // namespace

ParetoFront decomposition_solve(const MotspInstance& inst, int n_weights, std::uint64_t seed,
                                DecompositionLog* log) {
  inst.validate();
  const int n = static_cast<int>(inst.size());
  if (n < 2) throw std::invalid_argument("decomposition_solve: need at least 2 cities");
  if (n_weights < 2) throw std::invalid_argument("decomposition_solve: need at least 2 weights");

  const Eigen::MatrixXd d1 = distance_matrix(inst.coords1);
  const Eigen::MatrixXd d2 = distance_matrix(inst.coords2);

  std::mt19937_64 rng(seed);
  std::vector<ParetoFront::Member> members;
  members.reserve(static_cast<size_t>(n_weights));
  for (int k = 0; k < n_weights; ++k) {
    const double lambda = static_cast<double>(k) / (n_weights - 1);
    const Eigen::MatrixXd w = lambda * d1 + (1.0 - lambda) * d2;
    const int start = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    Tour tour = nearest_neighbor_tour(w, start);
    const TwoOptStats stats = two_opt(w, tour);
    if (log != nullptr) {
      log->lambdas.push_back(lambda);
      log->stats.push_back(stats);
    }
    ObjectiveVector obj = tour_objectives(inst, tour);
    members.push_back({std::move(tour), obj});
  }
  return pareto_filter(std::move(members));
}

double hypervolume(const ParetoFront& front, const ObjectiveVector& reference) {
  for (const auto& m : front.members) {
    if (m.objectives.f1 > reference.f1 || m.objectives.f2 > reference.f2) {
      throw std::invalid_argument("hypervolume: reference must weakly dominate no member");
    }
  }
  std::vector<ObjectiveVector> pts;
  pts.reserve(front.members.size());
  for (const auto& m : front.members) pts.push_back(m.objectives);
  std::sort(pts.begin(), pts.end(),
            [](const ObjectiveVector& a, const ObjectiveVector& b) { return a.f1 < b.f1; });

  double volume = 0.0;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double next_f1 = i + 1 < pts.size() ? pts[i + 1].f1 : reference.f1;
    volume += (next_f1 - pts[i].f1) * (reference.f2 - pts[i].f2);
  }
  return volume;
}

MotspInstance random_instance(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_instance: n must be >= 1");
  std::mt19937_64 rng(seed);
  MotspInstance inst;
  inst.coords1.resize(2, n);
  inst.coords2.resize(2, n);
  for (int i = 0; i < n; ++i) {
    inst.coords1(0, i) = uniform01(rng);
    inst.coords1(1, i) = uniform01(rng);
    inst.coords2(0, i) = uniform01(rng);
    inst.coords2(1, i) = uniform01(rng);
  }
  return inst;
}

std::optional<Eigen::Vector2i> nearest_free_cell(const OccupancyGrid& grid,
                                                 const Vector2d& point) {
  double best = std::numeric_limits<double>::infinity();
  std::optional<Eigen::Vector2i> result;
  for (int cy = 0; cy < grid.height; ++cy) {
    for (int cx = 0; cx < grid.width; ++cx) {
      if (grid.at(cx, cy) != Cell::Free) continue;
      const Pose2D center = grid.center_of(cx, cy);
      const double dist = (Vector2d(center.x, center.y) - point).squaredNorm();
      if (dist < best) {  // scan order already breaks ties by lowest (row, col)
        best = dist;
        result = Eigen::Vector2i(cx, cy);
      }
    }
  }
  return result;
}

namespace {

size_t knee_member(const ParetoFront& front) {
  const auto& m = front.members;
  if (m.size() <= 1) return 0;
  const Vector2d a(m.front().objectives.f1, m.front().objectives.f2);
  const Vector2d b(m.back().objectives.f1, m.back().objectives.f2);
  const Vector2d chord = b - a;
  const double chord_len = chord.norm();
  if (chord_len < 1e-15) return 0;

  size_t best = 0;
  double best_dist = -1.0;
  for (size_t i = 0; i < m.size(); ++i) {
    const Vector2d p(m[i].objectives.f1, m[i].objectives.f2);
    const Vector2d d = p - a;
    const double dist = std::abs(chord.x() * d.y() - chord.y() * d.x()) / chord_len;
    if (dist > best_dist) {
      best_dist = dist;
      best = i;
    }
  }
  return best;
}

}  // namespace

std::vector<int> allocate_cells(const PolygonDictionary& dict, const OccupancyGrid& grid,
                                const Pose2D& start, int n_weights, std::uint64_t seed,
                                const std::map<int, Vector2d>& b2_overrides) {
  if (dict.entries.empty()) throw std::invalid_argument("allocate_cells: empty dictionary");

  const Eigen::Vector2i start_cell = grid.cell_of(start.x, start.y);
  if (!grid.in_bounds(start_cell.x(), start_cell.y()) ||
      grid.at(start_cell.x(), start_cell.y()) != Cell::Free) {
    throw std::invalid_argument("allocate_cells: start is not on a free cell");
  }

  // One BFS from the start covers every reachability query.
  std::vector<bool> reachable(grid.cells.size(), false);
  std::deque<int> queue;
  auto idx = [&](int cx, int cy) { return cy * grid.width + cx; };
  reachable[static_cast<size_t>(idx(start_cell.x(), start_cell.y()))] = true;
  queue.push_back(idx(start_cell.x(), start_cell.y()));
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const int cx = cur % grid.width, cy = cur / grid.width;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        if (dx == 0 && dy == 0) continue;
        const int nx = cx + dx, ny = cy + dy;
        if (!grid.in_bounds(nx, ny) || grid.at(nx, ny) != Cell::Free) continue;
        const size_t ni = static_cast<size_t>(idx(nx, ny));
        if (reachable[ni]) continue;
        reachable[ni] = true;
        queue.push_back(idx(nx, ny));
      }
    }
  }

  std::vector<int> ids;
  MotspInstance inst;
  inst.coords1.resize(2, static_cast<Eigen::Index>(dict.entries.size()));
  inst.coords2.resize(2, static_cast<Eigen::Index>(dict.entries.size()));
  Eigen::Index col = 0;
  for (const auto& [id, poly] : dict.entries) {
    const Vector2d ground(poly.centroid.x(), poly.centroid.y());
    const auto cell = nearest_free_cell(grid, ground);
    if (!cell || !reachable[static_cast<size_t>(idx(cell->x(), cell->y()))]) {
      throw std::runtime_error("allocate_cells: polygon " + std::to_string(id) +
                               " is unreachable from the start pose");
    }
    ids.push_back(id);
    inst.coords1.col(col) = ground;
    const auto it = b2_overrides.find(id);
    inst.coords2.col(col) = it != b2_overrides.end() ? it->second : ground;
    ++col;
  }

  if (ids.size() == 1) return ids;

  const ParetoFront front = decomposition_solve(inst, n_weights, seed);
  const auto& tour = front.members[knee_member(front)].tour.order;

  // Rotate so the visit starts at the surface nearest the start pose.
  const Vector2d origin(start.x, start.y);
  size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < tour.size(); ++i) {
    const double dist = (inst.coords1.col(tour[i]) - origin).squaredNorm();
    if (dist < best) {
      best = dist;
      first = i;
    }
  }

  std::vector<int> order;
  order.reserve(tour.size());
  for (size_t i = 0; i < tour.size(); ++i) {
    order.push_back(ids[static_cast<size_t>(tour[(first + i) % tour.size()])]);
  }
  return order;
}

}  // namespace uvplan
