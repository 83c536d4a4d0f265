#pragma once

#include "uvplan/world.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace uvplan {

// Bi-objective TSP instance: every city carries one 2-D point per objective
// embedding, and each objective is the closed Euclidean tour length in its
// embedding.
struct MotspInstance {
  Matrix2Xd coords1;
  Matrix2Xd coords2;

  Eigen::Index size() const { return coords1.cols(); }
  void validate() const;  // throws std::invalid_argument
};

struct Tour {
  std::vector<int> order;  // permutation of 0..n-1
};

struct ObjectiveVector {
  double f1 = 0.0;
  double f2 = 0.0;
};

struct ParetoFront {
  struct Member {
    Tour tour;
    ObjectiveVector objectives;
  };
  std::vector<Member> members;  // mutually non-dominated, sorted ascending by f1
};

// Closed tour length per embedding, including the return leg.
ObjectiveVector tour_objectives(const MotspInstance& inst, const Tour& tour);

// Weak Pareto dominance: no worse in both objectives, strictly better in one.
inline bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  return a.f1 <= b.f1 && a.f2 <= b.f2 && (a.f1 < b.f1 || a.f2 < b.f2);
}

// Non-dominated filter with deterministic ties: duplicate objective vectors
// keep the lexicographically smallest tour order.
ParetoFront pareto_filter(std::vector<ParetoFront::Member> members);

// Exact front by enumerating (n-1)!/2 tours (city 0 fixed, canonical
// direction). Hard cap n <= 10.
ParetoFront brute_force_pareto(const MotspInstance& inst);

// Exact minimizer of lambda * f1 + (1 - lambda) * f2 by Held-Karp dynamic
// programming over subsets. Hard cap n <= 13.
Tour scalarized_optimal(const MotspInstance& inst, double lambda);

struct TwoOptStats {
  int passes = 0;
  int swaps = 0;
};

struct DecompositionLog {
  std::vector<double> lambdas;
  std::vector<TwoOptStats> stats;
};

// Decomposition by scalarization: for each weight lambda_k = k/(n_weights-1)
// build a nearest-neighbor tour on the scalarized edge weights (start city
// drawn from the seeded generator) and improve it with first-improvement
// 2-opt to a local optimum; the result is the non-dominated filter over all
// n_weights tours. Deterministic for a fixed seed.
ParetoFront decomposition_solve(const MotspInstance& inst, int n_weights, std::uint64_t seed,
                                DecompositionLog* log = nullptr);

// 2-D hypervolume (dominated area against `reference`) by the standard sweep
// over f1-sorted members. Throws when any member exceeds the reference in
// either objective.
double hypervolume(const ParetoFront& front, const ObjectiveVector& reference);

// Uniform random instance in [0,1]^2 x [0,1]^2 from the seeded generator.
MotspInstance random_instance(int n, std::uint64_t seed);

// Visiting order over the dictionary surfaces: b1 = centroid ground-plane
// coordinates, b2 = per-polygon override (defaults to b1). Solves by
// decomposition, picks the knee member (maximum perpendicular distance to
// the front's endpoint chord) and rotates the tour to start at the surface
// nearest `start`. Every surface's approach cell must be reachable from
// `start` over free cells; unreachable surfaces raise std::runtime_error
// naming the polygon id.
std::vector<int> allocate_cells(const PolygonDictionary& dict, const OccupancyGrid& grid,
                                const Pose2D& start, int n_weights, std::uint64_t seed,
                                const std::map<int, Vector2d>& b2_overrides = {});

// Nearest free cell to a ground-plane point, ties broken by lowest (row, col).
std::optional<Eigen::Vector2i> nearest_free_cell(const OccupancyGrid& grid, const Vector2d& point);

}  // namespace uvplan
