#pragma once

#include "uvplan/dose.hpp"
#include "uvplan/waypoints.hpp"
#include "uvplan/world.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uvplan {

// Validation failure with the offending field path (e.g. "sources[0].grid_n").
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message), field_path_(std::move(field_path)) {}
  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

struct ScenarioSurface {
  SurfacePolygon polygon;
  std::optional<Vector2d> b2;  // second MOTSP embedding; defaults to centroid
};

struct TrajectoryGenerator {
  enum class Kind { Boustrophedon, LineScan };
  Kind kind = Kind::Boustrophedon;
  double standoff = 0.02;      // boustrophedon
  double lane_spacing = 0.10;  // boustrophedon
  double distance = 1.0;       // line scan
};

// Declarative experiment description (JSON on disk, conventionally *.scn).
// All units SI: meters, seconds, watts.
struct Scenario {
  std::uint64_t seed = 0;
  double exposure = 0.0;   // seconds per surface
  double dt = 0.05;        // integrator step
  double cell_size = 0.01; // surface grid cell
  int n_weights = 51;      // decomposition weights for planning

  std::vector<LightSource> sources;
  std::vector<ScenarioSurface> surfaces;    // exclusive with cloud_file
  std::optional<std::string> cloud_file;    // surfaces from segmentation

  std::optional<TimedTrajectory> explicit_trajectory;  // exclusive with generator
  std::optional<TrajectoryGenerator> generator;

  PathogenDoseTable pathogens = PathogenDoseTable::defaults();

  std::optional<std::string> map_pgm;  // planning inputs
  std::optional<Pose2D> start;
};

Scenario load_scenario(const std::string& path);  // throws ScenarioError
void save_scenario(const Scenario& scenario, const std::string& path);

// Scan trajectory for one surface per the scenario's generator or explicit
// samples.
TimedTrajectory scenario_trajectory(const Scenario& scenario, const SurfacePolygon& surface,
                                    std::vector<std::string>* warnings = nullptr);

}  // namespace uvplan
