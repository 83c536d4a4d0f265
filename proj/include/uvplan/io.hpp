#pragma once

#include "uvplan/coverage.hpp"
#include "uvplan/dose.hpp"
#include "uvplan/segmentation.hpp"
#include "uvplan/waypoints.hpp"
#include "uvplan/world.hpp"

#include <stdexcept>
#include <string>

namespace uvplan {

// Raised by readers on unreadable or malformed input files; the CLI maps it
// to the invalid-input exit status.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All writers are atomic (temp file + rename) and deterministic: identical
// inputs produce byte-identical files, and write -> read -> write is
// byte-stable.

void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

// Occupancy grid as ASCII PGM (0 = occupied, 205 = unknown, 254 = free) with
// a JSON sidecar (same path, extension replaced by .json) holding resolution
// and origin.
void write_grid_pgm(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid read_grid_pgm(const std::string& path);

// Point cloud: one header line "count frame tx ty tz qw qx qy qz" followed by
// count lines of "x y z".
void write_cloud(const PointCloud& cloud, const std::string& path);
PointCloud read_cloud(const std::string& path);

void write_dictionary(const PolygonDictionary& dict, const std::string& path);
PolygonDictionary read_dictionary(const std::string& path);

// MOTSP instance: line 1 "n", then n lines "x1 y1 x2 y2".
void write_instance(const MotspInstance& inst, const std::string& path);
MotspInstance read_instance(const std::string& path);

// Pareto front CSV: header "f1,f2,tour", tour as space-separated city ids.
void write_front_csv(const ParetoFront& front, const std::string& path);

// Dose map CSV: header "i,j,x,y,z,dose_J_per_m2", row-major cell order.
void write_dose_csv(const DoseMap& map, const std::string& path);

struct DoseCsv {
  std::vector<int> i, j;
  std::vector<double> x, y, z, dose;
};
DoseCsv read_dose_csv(const std::string& path);
void write_dose_csv(const DoseCsv& rows, const std::string& path);

// 8-bit grayscale PGM heatmap, one pixel per cell, linearly scaled so the
// maximum dose maps to 255; the J/m^2-per-level factor is recorded in the
// comment line.
void write_heatmap_pgm(const DoseMap& map, const std::string& path);

void write_mission(const Mission& mission, const std::string& path);
Mission read_mission(const std::string& path);

void write_report(const std::vector<std::pair<int, DisinfectionReport>>& per_surface,
                  const std::string& path);

}  // namespace uvplan
