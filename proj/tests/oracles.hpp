#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include "uvplan/coverage.hpp"
#include "uvplan/irradiance.hpp"
#include "uvplan/world.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace oracles {

// Plain Dijkstra over free cells with the same 8-connected step costs; cost
// rebuilt from step counts exactly like uvplan::path_cost.
std::optional<double> dijkstra_cost(const uvplan::OccupancyGrid& grid,
                                    const Eigen::Vector2i& start, const Eigen::Vector2i& goal);

// Minimum-area bounding box by exhaustive angle sweep (default 0.1 deg).
double min_rect_area_sweep(const uvplan::Matrix2Xd& points, double step_deg = 0.1);

// Occupied-voxel count by independent binning.
long voxel_count(const uvplan::Matrix3Xd& points, double voxel);

// Pareto-optimal objective vectors by a second exhaustive enumeration with a
// different canonical form and a sweep-based non-dominated filter. Tours are
// canonicalized before length evaluation so values are bit-comparable.
std::vector<uvplan::ObjectiveVector> pareto_objectives(const uvplan::MotspInstance& inst);

// Monte-Carlo dominated-area estimate of the 2-D hypervolume.
double mc_hypervolume(const uvplan::ParetoFront& front, const uvplan::ObjectiveVector& reference,
                      long samples, std::uint64_t seed);

// Radiant power collected over an enclosing hemisphere (receiving normals
// pointing back at the source) by midpoint quadrature on a lat-long grid.
double panel_hemisphere_power(const uvplan::LedPanelSource& panel, double radius, int n_theta,
                              int n_phi);

}  // namespace oracles
