#pragma once

#include "uvplan/dose.hpp"
#include "uvplan/world.hpp"

#include <string>
#include <vector>

namespace uvplan {

struct ScanPattern {
  double standoff = 0.02;      // meters above the surface
  double lane_spacing = 0.10;  // meters between lanes
  double speed = 0.0;          // m/s; 0 derives the speed from the exposure
};

// Back-and-forth lanes parallel to the rectangle's longer side, at `standoff`
// above the surface with the emitter axis facing it. Lane count is chosen so
// effective spacing never exceeds pattern.lane_spacing; timestamps give
// constant speed over exactly `exposure` seconds (unless pattern.speed > 0,
// which fixes the speed and derives the duration instead). When lane_spacing
// exceeds the rectangle's short side a single center lane is generated and
// the fallback is reported through `warnings`.
TimedTrajectory boustrophedon(const SurfacePolygon& rectangle, const ScanPattern& pattern,
                              double exposure, std::vector<std::string>* warnings = nullptr);

// Single straight pass parallel to the wall's horizontal extent at the given
// offset along the wall normal, mid-height, constant speed over `exposure`.
TimedTrajectory line_scan(const SurfacePolygon& wall, double distance, double exposure);

struct Mission {
  std::vector<int> cell_order;
  std::vector<std::vector<Pose2D>> base_paths;  // one leg per visited cell
  std::vector<TimedTrajectory> scans;           // one scan per visited cell
  double total_exposure = 0.0;
  std::vector<std::string> warnings;
};

// Assembles base legs (A* between approach poses) and per-cell boustrophedon
// scans for the given visiting order. Throws std::runtime_error naming the
// polygon id when an approach pose is unreachable.
Mission assemble_mission(const std::vector<int>& order, const PolygonDictionary& dict,
                         const OccupancyGrid& grid, const ScanPattern& pattern,
                         double per_cell_exposure, const Pose2D& start);

}  // namespace uvplan
