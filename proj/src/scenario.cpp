#include "uvplan/scenario.hpp"

#include "uvplan/io.hpp"

#include <json.hpp>

#include <fstream>

namespace uvplan {

using nlohmann::json;

namespace {

const json& require(const json& parent, const std::string& key, const std::string& path) {
  const auto it = parent.find(key);
  if (it == parent.end()) throw ScenarioError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double positive_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "must be a number");
  const double value = j.get<double>();
  if (!(value > 0.0)) throw ScenarioError(path, "must be positive");
  return value;
}

int positive_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ScenarioError(path, "must be an integer");
  const int value = j.get<int>();
  if (value < 1) throw ScenarioError(path, "must be >= 1");
  return value;
}

Vector3d vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw ScenarioError(path, "must be [x, y, z]");
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

Pose3D pose3(const json& j, const std::string& path) {
  Pose3D pose;
  pose.position = vec3(require(j, "position", path), join(path, "position"));
  const json& q = require(j, "orientation", path);
  if (!q.is_array() || q.size() != 4) {
    throw ScenarioError(join(path, "orientation"), "must be [w, x, y, z]");
  }
  pose.orientation = Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(),
                                 q.at(2).get<double>(), q.at(3).get<double>());
  if (std::abs(pose.orientation.norm() - 1.0) > 1e-9) {
    throw ScenarioError(join(path, "orientation"), "quaternion must be unit length");
  }
  return pose;
}

LightSource parse_source(const json& j, const std::string& path) {
  const std::string type = require(j, "type", path).get<std::string>();
  if (type == "led_panel") {
    LedPanelSource src;
    if (j.contains("grid_n")) src.grid_n = positive_int(j["grid_n"], join(path, "grid_n"));
    if (j.contains("panel_side")) {
      src.panel_side = positive_number(j["panel_side"], join(path, "panel_side"));
    }
    if (j.contains("per_led_radiant_power")) {
      src.per_led_radiant_power =
          positive_number(j["per_led_radiant_power"], join(path, "per_led_radiant_power"));
    }
    if (j.contains("electrical_wattage")) {
      src.electrical_wattage =
          positive_number(j["electrical_wattage"], join(path, "electrical_wattage"));
    }
    if (j.contains("pose")) src.pose = pose3(j["pose"], join(path, "pose"));
    return src;
  }
  if (type == "tube_lamp_bank") {
    TubeLampBankSource src;
    if (j.contains("lamp_count")) {
      src.lamp_count = positive_int(j["lamp_count"], join(path, "lamp_count"));
    }
    if (j.contains("lamp_length")) {
      src.lamp_length = positive_number(j["lamp_length"], join(path, "lamp_length"));
    }
    if (j.contains("per_lamp_radiant_power")) {
      src.per_lamp_radiant_power =
          positive_number(j["per_lamp_radiant_power"], join(path, "per_lamp_radiant_power"));
    }
    if (j.contains("per_lamp_wattage")) {
      src.per_lamp_wattage =
          positive_number(j["per_lamp_wattage"], join(path, "per_lamp_wattage"));
    }
    if (j.contains("segment_count")) {
      src.segment_count = positive_int(j["segment_count"], join(path, "segment_count"));
    }
    const json& poses = require(j, "poses", path);
    if (!poses.is_array() || static_cast<int>(poses.size()) != src.lamp_count) {
      throw ScenarioError(join(path, "poses"), "must list exactly lamp_count poses");
    }
    src.poses.clear();
    for (size_t i = 0; i < poses.size(); ++i) {
      src.poses.push_back(pose3(poses.at(i), join(path, "poses[" + std::to_string(i) + "]")));
    }
    return src;
  }
  throw ScenarioError(join(path, "type"), "unknown source type '" + type + "'");
}

json source_to_json(const LightSource& src) {
  json j;
  if (const auto* panel = std::get_if<LedPanelSource>(&src)) {
    j["type"] = "led_panel";
    j["grid_n"] = panel->grid_n;
    j["panel_side"] = panel->panel_side;
    j["per_led_radiant_power"] = panel->per_led_radiant_power;
    j["electrical_wattage"] = panel->electrical_wattage;
    j["pose"] = {{"position",
                  {panel->pose.position.x(), panel->pose.position.y(), panel->pose.position.z()}},
                 {"orientation",
                  {panel->pose.orientation.w(), panel->pose.orientation.x(),
                   panel->pose.orientation.y(), panel->pose.orientation.z()}}};
  } else {
    const auto& bank = std::get<TubeLampBankSource>(src);
    j["type"] = "tube_lamp_bank";
    j["lamp_count"] = bank.lamp_count;
    j["lamp_length"] = bank.lamp_length;
    j["per_lamp_radiant_power"] = bank.per_lamp_radiant_power;
    j["per_lamp_wattage"] = bank.per_lamp_wattage;
    j["segment_count"] = bank.segment_count;
    json poses = json::array();
    for (const Pose3D& p : bank.poses) {
      poses.push_back({{"position", {p.position.x(), p.position.y(), p.position.z()}},
                       {"orientation",
                        {p.orientation.w(), p.orientation.x(), p.orientation.y(),
                         p.orientation.z()}}});
    }
    j["poses"] = poses;
  }
  return j;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw ScenarioError("", "scenario must be a JSON object");
  Scenario sc;

  sc.exposure = positive_number(require(doc, "exposure", ""), "exposure");
  if (doc.contains("dt")) sc.dt = positive_number(doc["dt"], "dt");
  if (doc.contains("cell_size")) sc.cell_size = positive_number(doc["cell_size"], "cell_size");
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer()) throw ScenarioError("seed", "must be an integer");
    sc.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("n_weights")) {
    sc.n_weights = positive_int(doc["n_weights"], "n_weights");
    if (sc.n_weights < 2) throw ScenarioError("n_weights", "must be >= 2");
  }

  const json& sources = require(doc, "sources", "");
  if (!sources.is_array() || sources.empty()) {
    throw ScenarioError("sources", "must be a non-empty array");
  }
  for (size_t i = 0; i < sources.size(); ++i) {
    sc.sources.push_back(parse_source(sources.at(i), "sources[" + std::to_string(i) + "]"));
  }

  const json& surfaces = require(doc, "surfaces", "");
  const bool has_polygons = surfaces.contains("polygons");
  const bool has_cloud = surfaces.contains("cloud");
  if (has_polygons == has_cloud) {
    throw ScenarioError("surfaces", "must hold exactly one of 'polygons' or 'cloud'");
  }
  if (has_cloud) {
    sc.cloud_file = surfaces["cloud"].get<std::string>();
  } else {
    const json& polys = surfaces["polygons"];
    if (!polys.is_array() || polys.empty()) {
      throw ScenarioError("surfaces.polygons", "must be a non-empty array");
    }
    for (size_t i = 0; i < polys.size(); ++i) {
      const std::string path = "surfaces.polygons[" + std::to_string(i) + "]";
      const json& pj = polys.at(i);
      const json& verts = require(pj, "vertices", path);
      if (!verts.is_array() || verts.size() < 3) {
        throw ScenarioError(join(path, "vertices"), "need at least 3 vertices");
      }
      Matrix3Xd m(3, static_cast<Eigen::Index>(verts.size()));
      for (size_t v = 0; v < verts.size(); ++v) {
        m.col(static_cast<Eigen::Index>(v)) =
            vec3(verts.at(v), join(path, "vertices[" + std::to_string(v) + "]"));
      }
      ScenarioSurface surface;
      const int id = pj.contains("id") ? pj["id"].get<int>() : static_cast<int>(i) + 1;
      try {
        surface.polygon = make_polygon(m, id);
      } catch (const std::invalid_argument& err) {
        throw ScenarioError(join(path, "vertices"), err.what());
      }
      if (pj.contains("b2")) {
        const json& b2 = pj["b2"];
        if (!b2.is_array() || b2.size() != 2) {
          throw ScenarioError(join(path, "b2"), "must be [x, y]");
        }
        surface.b2 = Vector2d(b2.at(0).get<double>(), b2.at(1).get<double>());
      }
      sc.surfaces.push_back(std::move(surface));
    }
  }

  const json& traj = require(doc, "trajectory", "");
  const bool has_generator = traj.contains("generator");
  const bool has_samples = traj.contains("samples");
  if (has_generator == has_samples) {
    throw ScenarioError("trajectory", "must hold exactly one of 'generator' or 'samples'");
  }
  if (has_generator) {
    TrajectoryGenerator gen;
    const std::string kind = traj["generator"].get<std::string>();
    if (kind == "boustrophedon") {
      gen.kind = TrajectoryGenerator::Kind::Boustrophedon;
    } else if (kind == "line_scan") {
      gen.kind = TrajectoryGenerator::Kind::LineScan;
    } else {
      throw ScenarioError("trajectory.generator", "unknown generator '" + kind + "'");
    }
    if (traj.contains("standoff")) {
      gen.standoff = positive_number(traj["standoff"], "trajectory.standoff");
    }
    if (traj.contains("lane_spacing")) {
      gen.lane_spacing = positive_number(traj["lane_spacing"], "trajectory.lane_spacing");
    }
    if (traj.contains("distance")) {
      gen.distance = positive_number(traj["distance"], "trajectory.distance");
    }
    sc.generator = gen;
  } else {
    TimedTrajectory explicit_traj;
    const json& samples = traj["samples"];
    if (!samples.is_array() || samples.size() < 2) {
      throw ScenarioError("trajectory.samples", "need at least 2 samples");
    }
    for (size_t i = 0; i < samples.size(); ++i) {
      const std::string path = "trajectory.samples[" + std::to_string(i) + "]";
      const json& s = samples.at(i);
      explicit_traj.times.push_back(require(s, "t", path).get<double>());
      explicit_traj.poses.push_back(pose3(s, path));
    }
    try {
      explicit_traj.validate();
    } catch (const std::invalid_argument& err) {
      throw ScenarioError("trajectory.samples", err.what());
    }
    sc.explicit_trajectory = std::move(explicit_traj);
  }

  if (doc.contains("pathogens")) {
    const json& pathogens = doc["pathogens"];
    if (!pathogens.is_object() || pathogens.empty()) {
      throw ScenarioError("pathogens", "must be a non-empty object");
    }
    sc.pathogens.required.clear();
    for (const auto& [name, dose] : pathogens.items()) {
      sc.pathogens.required[name] = positive_number(dose, "pathogens." + name);
    }
  }

  if (doc.contains("map")) sc.map_pgm = doc["map"].get<std::string>();
  if (doc.contains("start")) {
    const json& start = doc["start"];
    sc.start = Pose2D(require(start, "x", "start").get<double>(),
                      require(start, "y", "start").get<double>(),
                      start.contains("theta") ? start["theta"].get<double>() : 0.0);
  }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json doc;
  doc["seed"] = sc.seed;
  doc["exposure"] = sc.exposure;
  doc["dt"] = sc.dt;
  doc["cell_size"] = sc.cell_size;
  doc["n_weights"] = sc.n_weights;

  json sources = json::array();
  for (const auto& src : sc.sources) sources.push_back(source_to_json(src));
  doc["sources"] = sources;

  if (sc.cloud_file) {
    doc["surfaces"] = {{"cloud", *sc.cloud_file}};
  } else {
    json polys = json::array();
    for (const auto& surface : sc.surfaces) {
      json verts = json::array();
      for (Eigen::Index i = 0; i < surface.polygon.vertices.cols(); ++i) {
        verts.push_back({surface.polygon.vertices(0, i), surface.polygon.vertices(1, i),
                         surface.polygon.vertices(2, i)});
      }
      json pj{{"id", surface.polygon.id}, {"vertices", verts}};
      if (surface.b2) pj["b2"] = {surface.b2->x(), surface.b2->y()};
      polys.push_back(pj);
    }
    doc["surfaces"] = {{"polygons", polys}};
  }

  if (sc.generator) {
    json traj;
    traj["generator"] = sc.generator->kind == TrajectoryGenerator::Kind::Boustrophedon
                            ? "boustrophedon"
                            : "line_scan";
    if (sc.generator->kind == TrajectoryGenerator::Kind::Boustrophedon) {
      traj["standoff"] = sc.generator->standoff;
      traj["lane_spacing"] = sc.generator->lane_spacing;
    } else {
      traj["distance"] = sc.generator->distance;
    }
    doc["trajectory"] = traj;
  } else if (sc.explicit_trajectory) {
    json samples = json::array();
    for (size_t i = 0; i < sc.explicit_trajectory->times.size(); ++i) {
      const Pose3D& p = sc.explicit_trajectory->poses[i];
      samples.push_back(
          {{"t", sc.explicit_trajectory->times[i]},
           {"position", {p.position.x(), p.position.y(), p.position.z()}},
           {"orientation",
            {p.orientation.w(), p.orientation.x(), p.orientation.y(), p.orientation.z()}}});
    }
    doc["trajectory"] = {{"samples", samples}};
  }

  json pathogens;
  for (const auto& [name, dose] : sc.pathogens.required) pathogens[name] = dose;
  doc["pathogens"] = pathogens;

  if (sc.map_pgm) doc["map"] = *sc.map_pgm;
  if (sc.start)

    doc["start"] = {{"x", sc.start->x}, {"y", sc.start->y}, {"theta", sc.start->theta}};
  return doc;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& err) {
    throw ScenarioError("", std::string("JSON parse failure: ") + err.what());
  } catch (const std::runtime_error& err) {
    throw ScenarioError("", err.what());
  }
  try {
    return scenario_from_json(doc);
  } catch (const ScenarioError&) {
    throw;
  } catch (const json::exception& err) {
    throw ScenarioError("", std::string("malformed scenario: ") + err.what());
  }
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  atomic_write(path, scenario_to_json(scenario).dump(2) + "\n");
}

TimedTrajectory scenario_trajectory(const Scenario& scenario, const SurfacePolygon& surface,
                                    std::vector<std::string>* warnings) {
  if (scenario.explicit_trajectory) return *scenario.explicit_trajectory;
  if (!scenario.generator) throw ScenarioError("trajectory", "missing generator");
  if (scenario.generator->kind == TrajectoryGenerator::Kind::Boustrophedon) {
    ScanPattern pattern;
    pattern.standoff = scenario.generator->standoff;
    pattern.lane_spacing = scenario.generator->lane_spacing;
    return boustrophedon(surface, pattern, scenario.exposure, warnings);
  }
  return line_scan(surface, scenario.generator->distance, scenario.exposure);
}

}  // namespace uvplan
