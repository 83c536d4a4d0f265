#include "uvplan/coverage.hpp"
#include "uvplan/dose.hpp"
#include "uvplan/io.hpp"
#include "uvplan/scenario.hpp"
#include "uvplan/segmentation.hpp"
#include "uvplan/waypoints.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace uvplan;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitRuntimeFailure = 2;

void print_error(const std::string& field_path, const std::string& message) {
  const nlohmann::json record{{"error", {{"path", field_path}, {"message", message}}}};
  std::cerr << record.dump() << "\n";
}

std::string out_path(const std::string& out_dir, const std::string& name) {
  return (std::filesystem::path(out_dir) / name).string();
}

struct Overrides {
  std::optional<double> dt;
  std::optional<double> cell_size;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_weights;
};

void apply(const Overrides& ov, Scenario& sc) {
  if (ov.dt) sc.dt = *ov.dt;
  if (ov.cell_size) sc.cell_size = *ov.cell_size;
  if (ov.seed) sc.seed = *ov.seed;
  if (ov.n_weights) sc.n_weights = *ov.n_weights;
}

PolygonDictionary segment_cloud_file(const std::string& path) {
  const PointCloud raw = read_cloud(path);
  PolygonDictionary dict;
  PointCloud cloud = remove_ground(voxel_downsample(preprocess(raw)));
  const SegmentationParams params;
  if (cloud.size() <= params.k_neighbors) return dict;  // too sparse: empty dictionary
  for (const PlaneSegment& segment : segment_planes(cloud, params)) {
    dict = dictionary_update(dict, fit_rectangle(segment));
  }
  return dict;
}

std::vector<ScenarioSurface> resolve_surfaces(const Scenario& sc) {
  if (!sc.cloud_file) return sc.surfaces;
  std::vector<ScenarioSurface> surfaces;
  for (const auto& [id, poly] : segment_cloud_file(*sc.cloud_file).entries) {
    surfaces.push_back({poly, std::nullopt});
  }
  if (surfaces.empty()) {
    throw std::runtime_error("no surfaces recovered from cloud " + *sc.cloud_file);
  }
  return surfaces;
}

int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 const Overrides& ov) {
  Scenario sc = load_scenario(scenario_path);
  apply(ov, sc);

  const std::vector<ScenarioSurface> surfaces = resolve_surfaces(sc);
  std::vector<std::pair<int, DisinfectionReport>> reports;
  std::vector<std::string> warnings;

  for (const ScenarioSurface& surface : surfaces) {
    const int id = surface.polygon.id;
    const TimedTrajectory traj = scenario_trajectory(sc, surface.polygon, &warnings);
    const SurfaceGrid grid = SurfaceGrid::from_polygon(surface.polygon, sc.cell_size);
    const DoseMap map = simulate_dose(sc.sources, traj, grid, sc.dt);
    const DisinfectionReport rep = report(map, sc.sources, sc.exposure, sc.pathogens);

    const std::string suffix = std::to_string(id);
    write_dose_csv(map, out_path(out_dir, "dose_" + suffix + ".csv"));
    write_heatmap_pgm(map, out_path(out_dir, "heatmap_" + suffix + ".pgm"));
    reports.emplace_back(id, rep);

    std::cout << "surface " << id << ": avg_dose " << format_double(rep.avg_dose)
              << " J/m^2, min_dose " << format_double(rep.min_dose) << " J/m^2, energy "
              << format_double(rep.energy_consumption) << " W*hr, DPU "
              << format_double(rep.dpu) << "\n";
  }
  for (const std::string& w : warnings) std::cout << "warning: " << w << "\n";
  write_report(reports, out_path(out_dir, "report.json"));
  return kExitOk;
}

int cmd_plan(const std::string& input_path, const std::string& out_dir, bool exact,
             const Overrides& ov) {
  const std::string text = read_file(input_path);
  const bool is_scenario = !text.empty() && text.front() == '{';

  if (!is_scenario) {
    const MotspInstance inst = read_instance(input_path);
    const std::uint64_t seed = ov.seed.value_or(0);
    const int n_weights = ov.n_weights.value_or(51);
    const ParetoFront front =
        exact ? brute_force_pareto(inst) : decomposition_solve(inst, n_weights, seed);
    write_front_csv(front, out_path(out_dir, "front.csv"));
    std::cout << "front size " << front.members.size() << "\n";
    return kExitOk;
  }

  Scenario sc = load_scenario(input_path);
  apply(ov, sc);
  if (!sc.map_pgm) throw ScenarioError("map", "required for planning");
  if (!sc.start) throw ScenarioError("start", "required for planning");

  const OccupancyGrid grid = read_grid_pgm(*sc.map_pgm);
  const std::vector<ScenarioSurface> surfaces = resolve_surfaces(sc);
  PolygonDictionary dict;
  for (const ScenarioSurface& surface : surfaces) {
    dict = dictionary_update(dict, surface.polygon);
  }
  // Dictionary ids are freshly assigned; recover each entry's b2 override
  // from the nearest scenario surface.
  std::map<int, Vector2d> b2;
  for (const auto& [id, poly] : dict.entries) {
    double best = std::numeric_limits<double>::infinity();
    const ScenarioSurface* match = nullptr;
    for (const ScenarioSurface& surface : surfaces) {
      const double dist = (surface.polygon.centroid - poly.centroid).squaredNorm();
      if (dist < best) {
        best = dist;
        match = &surface;
      }
    }
    if (match != nullptr && match->b2) b2[id] = *match->b2;
  }

  MotspInstance inst;
  inst.coords1.resize(2, static_cast<Eigen::Index>(dict.entries.size()));
  inst.coords2.resize(2, static_cast<Eigen::Index>(dict.entries.size()));
  Eigen::Index col = 0;
  for (const auto& [id, poly] : dict.entries) {
    inst.coords1.col(col) = Vector2d(poly.centroid.x(), poly.centroid.y());
    const auto it = b2.find(id);
    inst.coords2.col(col) = it != b2.end() ? it->second : inst.coords1.col(col);
    ++col;
  }
  if (inst.size() >= 2) {
    const ParetoFront front = exact ? brute_force_pareto(inst)
                                    : decomposition_solve(inst, sc.n_weights, sc.seed);
    write_front_csv(front, out_path(out_dir, "front.csv"));
  } else {
    write_front_csv(ParetoFront{}, out_path(out_dir, "front.csv"));
  }

  const std::vector<int> order = allocate_cells(dict, grid, *sc.start, sc.n_weights, sc.seed, b2);
  ScanPattern pattern;
  if (sc.generator) {
    pattern.standoff = sc.generator->standoff;
    pattern.lane_spacing = sc.generator->lane_spacing;
  }
  const Mission mission = assemble_mission(order, dict, grid, pattern, sc.exposure, *sc.start);
  write_mission(mission, out_path(out_dir, "mission.json"));
  std::cout << "mission over " << order.size() << " surfaces, total exposure "
            << format_double(mission.total_exposure) << " s\n";
  return kExitOk;
}

int cmd_segment(const std::string& cloud_path, const std::string& out_dir) {
  const PolygonDictionary dict = segment_cloud_file(cloud_path);
  write_dictionary(dict, out_path(out_dir, "dictionary.json"));
  std::cout << "detected " << dict.entries.size() << " surfaces\n";
  return kExitOk;
}

int cmd_report(const std::string& dose_csv_path, const std::string& scenario_path,
               const std::string& out_dir) {
  const Scenario sc = load_scenario(scenario_path);
  const DoseCsv rows = read_dose_csv(dose_csv_path);
  if (rows.dose.empty()) throw std::runtime_error("empty dose CSV: " + dose_csv_path);

  DisinfectionReport rep;
  Eigen::Map<const Eigen::VectorXd> dose(rows.dose.data(),
                                         static_cast<Eigen::Index>(rows.dose.size()));
  rep.avg_dose = dose.mean();
  rep.min_dose = dose.minCoeff();
  rep.exposure_time = sc.exposure;
  rep.energy_consumption = electrical_power(sc.sources) * sc.exposure / 3600.0;
  rep.dpu = rep.avg_dose / rep.energy_consumption;
  for (const auto& [name, threshold] : sc.pathogens.required) {
    rep.coverage[name] = static_cast<double>((dose.array() >= threshold).count()) /
                         static_cast<double>(dose.size());
  }
  write_report({{0, rep}}, out_path(out_dir, "report.json"));
  std::cout << "avg_dose " << format_double(rep.avg_dose) << " J/m^2, energy "
            << format_double(rep.energy_consumption) << " W*hr, DPU " << format_double(rep.dpu)
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UV disinfection mission planning and dose simulation"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for generated artifacts")
      ->capture_default_str();

  Overrides ov;
  double dt = 0.0, cell_size = 0.0;
  std::uint64_t seed = 0;
  int n_weights = 0;
  auto* dt_opt = app.add_option("--dt", dt, "Integrator step override [s]");
  auto* cell_opt = app.add_option("--cell-size", cell_size, "Surface cell size override [m]");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed override");
  auto* weights_opt = app.add_option("--n-weights", n_weights, "Scalarization weight count");

  std::string scenario_path, plan_input, cloud_path, dose_csv_path, report_scenario;
  bool exact = false;

  auto* simulate = app.add_subcommand("simulate", "Run a dosage simulation scenario");
  simulate->add_option("scenario", scenario_path, "Scenario file (JSON .scn)")->required();

  auto* plan = app.add_subcommand("plan", "Plan surface visiting order / MOTSP front");
  plan->add_option("input", plan_input, "MOTSP instance or scenario file")->required();
  plan->add_flag("--exact", exact, "Exact Pareto front by enumeration (n <= 10)");

  auto* segment = app.add_subcommand("segment", "Segment planar surfaces from a point cloud");
  segment->add_option("cloud", cloud_path, "Point cloud file (x y z records)")->required();

  auto* rep = app.add_subcommand("report", "Recompute a disinfection report from a dose CSV");
  rep->add_option("dose_csv", dose_csv_path, "Dose map CSV")->required();
  rep->add_option("scenario", report_scenario, "Scenario supplying sources and exposure")
      ->required();

  CLI11_PARSE(app, argc, argv);

  if (*dt_opt) ov.dt = dt;
  if (*cell_opt) ov.cell_size = cell_size;
  if (*seed_opt) ov.seed = seed;
  if (*weights_opt) ov.n_weights = n_weights;

  try {
    std::filesystem::create_directories(out_dir);
    if (*simulate) return cmd_simulate(scenario_path, out_dir, ov);
    if (*plan) return cmd_plan(plan_input, out_dir, exact, ov);
    if (*segment) return cmd_segment(cloud_path, out_dir);
    if (*rep) return cmd_report(dose_csv_path, report_scenario, out_dir);
  } catch (const ScenarioError& err) {
    print_error(err.field_path(), err.what());
    return kExitInvalidInput;
  } catch (const ParseError& err) {
    print_error("", err.what());
    return kExitInvalidInput;
  } catch (const std::invalid_argument& err) {
    print_error("", err.what());
    return kExitInvalidInput;
  } catch (const std::exception& err) {
    print_error("", err.what());
    return kExitRuntimeFailure;
  }
  return kExitInvalidInput;
}
