#include "uvplan/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uvplan {

using nlohmann::json;

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

namespace {

json parse_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& err) {
    throw ParseError(path + ": " + err.what());
  }
}

double parse_double(const std::string& token, const std::string& context) {
  double value = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ParseError("malformed number '" + token + "' in " + context);
  }
  return value;
}

json pose2_to_json(const Pose2D& p) {
  return {{"x", p.x}, {"y", p.y}, {"theta", p.theta}};
}

Pose2D pose2_from_json(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()};
}

json pose3_to_json(const Pose3D& p) {
  return {{"position", {p.position.x(), p.position.y(), p.position.z()}},
          {"orientation", {p.orientation.w(), p.orientation.x(), p.orientation.y(),
                           p.orientation.z()}}};
}

Pose3D pose3_from_json(const json& j) {
  const auto& pos = j.at("position");
  const auto& q = j.at("orientation");
  Pose3D pose;
  pose.position = {pos.at(0).get<double>(), pos.at(1).get<double>(), pos.at(2).get<double>()};
  pose.orientation = Quaterniond(q.at(0).get<double>(), q.at(1).get<double>(),
                                 q.at(2).get<double>(), q.at(3).get<double>());
  return pose;
}

std::string sidecar_path(const std::string& pgm_path) {
  return std::filesystem::path(pgm_path).replace_extension(".json").string();
}

json polygon_to_json(const SurfacePolygon& poly) {
  json verts = json::array();
  for (Eigen::Index i = 0; i < poly.vertices.cols(); ++i) {
    verts.push_back({poly.vertices(0, i), poly.vertices(1, i), poly.vertices(2, i)});
  }
  return {{"id", poly.id},
          {"vertices", verts},
          {"unit_normal", {poly.unit_normal.x(), poly.unit_normal.y(), poly.unit_normal.z()}},
          {"centroid", {poly.centroid.x(), poly.centroid.y(), poly.centroid.z()}},
          {"area", poly.area}};
}

SurfacePolygon polygon_from_json(const json& j) {
  SurfacePolygon poly;
  poly.id = j.at("id").get<int>();
  const auto& verts = j.at("vertices");
  poly.vertices.resize(3, static_cast<Eigen::Index>(verts.size()));
  for (size_t i = 0; i < verts.size(); ++i) {
    for (int axis = 0; axis < 3; ++axis) {
      poly.vertices(axis, static_cast<Eigen::Index>(i)) =
          verts.at(i).at(static_cast<size_t>(axis)).get<double>();
    }
  }
  const auto& n = j.at("unit_normal");
  poly.unit_normal = {n.at(0).get<double>(), n.at(1).get<double>(), n.at(2).get<double>()};
  const auto& c = j.at("centroid");
  poly.centroid = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
  poly.area = j.at("area").get<double>();
  validate_polygon(poly);
  return poly;
}

}  // namespace

void write_grid_pgm(const OccupancyGrid& grid, const std::string& path) {
  std::ostringstream out;
  out << "P2\n" << grid.width << " " << grid.height << "\n255\n";
  for (int cy = 0; cy < grid.height; ++cy) {
    for (int cx = 0; cx < grid.width; ++cx) {
      int value = 254;
      switch (grid.at(cx, cy)) {
        case Cell::Occupied: value = 0; break;
        case Cell::Unknown: value = 205; break;
        case Cell::Free: value = 254; break;
      }
      out << value << (cx + 1 == grid.width ? "\n" : " ");
    }
  }
  atomic_write(path, out.str());

  json meta{{"resolution", grid.resolution}, {"origin", pose2_to_json(grid.origin)}};
  atomic_write(sidecar_path(path), meta.dump(2) + "\n");
}

OccupancyGrid read_grid_pgm(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string magic;
  in >> magic;
  if (magic != "P2") throw ParseError("not an ASCII PGM: " + path);
  int width = 0, height = 0, maxval = 0;
  in >> width >> height >> maxval;
  if (!in || width <= 0 || height <= 0) throw ParseError("bad PGM header: " + path);

  const json meta = parse_json_file(sidecar_path(path));
  OccupancyGrid grid = OccupancyGrid::uniform(width, height, meta.at("resolution").get<double>(),
                                              Cell::Free, pose2_from_json(meta.at("origin")));
  for (int cy = 0; cy < height; ++cy) {
    for (int cx = 0; cx < width; ++cx) {
      int value = 0;
      in >> value;
      if (!in) throw ParseError("truncated PGM: " + path);
      grid.at(cx, cy) = value < 128 ? Cell::Occupied : (value == 205 ? Cell::Unknown : Cell::Free);
    }
  }
  return grid;
}

void write_cloud(const PointCloud& cloud, const std::string& path) {
  const Eigen::Quaterniond q(cloud.sensor_pose.rotation());
  const Vector3d t = cloud.sensor_pose.translation();
  std::ostringstream out;
  out << cloud.size() << " " << cloud.frame << " " << format_double(t.x()) << " "
      << format_double(t.y()) << " " << format_double(t.z()) << " " << format_double(q.w()) << " "
      << format_double(q.x()) << " " << format_double(q.y()) << " " << format_double(q.z())
      << "\n";
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    out << format_double(cloud.points(0, i)) << " " << format_double(cloud.points(1, i)) << " "
        << format_double(cloud.points(2, i)) << "\n";
  }
  atomic_write(path, out.str());
}

PointCloud read_cloud(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty cloud file: " + path);
  std::istringstream hs(header);
  long count = -1;
  std::string frame;
  hs >> count >> frame;
  if (count < 0 || frame.empty()) throw ParseError("bad cloud header: " + path);

  PointCloud cloud;
  cloud.frame = frame;
  double tx, ty, tz, qw, qx, qy, qz;
  if (hs >> tx >> ty >> tz >> qw >> qx >> qy >> qz) {
    cloud.sensor_pose = Eigen::Isometry3d::Identity();
    cloud.sensor_pose.translate(Vector3d(tx, ty, tz));
    cloud.sensor_pose.rotate(Quaterniond(qw, qx, qy, qz));
  }

  cloud.points.resize(3, count);
  std::string line;
  for (long i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw ParseError("truncated cloud file: " + path);
    std::istringstream ls(line);
    std::string sx, sy, sz;
    if (!(ls >> sx >> sy >> sz)) throw ParseError("truncated cloud row in " + path);
    cloud.points(0, i) = parse_double(sx, path);
    cloud.points(1, i) = parse_double(sy, path);
    cloud.points(2, i) = parse_double(sz, path);
  }
  return cloud;
}

void write_dictionary(const PolygonDictionary& dict, const std::string& path) {
  json entries = json::array();
  for (const auto& [id, poly] : dict.entries) entries.push_back(polygon_to_json(poly));
  const json doc{{"next_id", dict.next_id}, {"entries", entries}};
  atomic_write(path, doc.dump(2) + "\n");
}

PolygonDictionary read_dictionary(const std::string& path) {
  const json doc = parse_json_file(path);
  try {
    PolygonDictionary dict;
    dict.next_id = doc.at("next_id").get<int>();
    for (const auto& entry : doc.at("entries")) {
      SurfacePolygon poly = polygon_from_json(entry);
      dict.entries.emplace(poly.id, std::move(poly));
    }
    return dict;
  } catch (const json::exception& err) {
    throw ParseError(path + ": " + err.what());
  }
}

void write_instance(const MotspInstance& inst, const std::string& path) {
  std::ostringstream out;
  out << inst.size() << "\n";
  for (Eigen::Index i = 0; i < inst.size(); ++i) {
    out << format_double(inst.coords1(0, i)) << " " << format_double(inst.coords1(1, i)) << " "
        << format_double(inst.coords2(0, i)) << " " << format_double(inst.coords2(1, i)) << "\n";
  }
  atomic_write(path, out.str());
}

MotspInstance read_instance(const std::string& path) {
  std::istringstream in(read_file(path));
  long n = -1;
  in >> n;
  if (n < 1) throw ParseError("bad instance header: " + path);
  MotspInstance inst;
  inst.coords1.resize(2, n);
  inst.coords2.resize(2, n);
  for (long i = 0; i < n; ++i) {
    std::string a, b, c, d;
    if (!(in >> a >> b >> c >> d)) throw ParseError("truncated instance: " + path);
    inst.coords1(0, i) = parse_double(a, path);
    inst.coords1(1, i) = parse_double(b, path);
    inst.coords2(0, i) = parse_double(c, path);
    inst.coords2(1, i) = parse_double(d, path);
  }
  inst.validate();
  return inst;
}

void write_front_csv(const ParetoFront& front, const std::string& path) {
  std::ostringstream out;
  out << "f1,f2,tour\n";
  for (const auto& m : front.members) {
    out << format_double(m.objectives.f1) << "," << format_double(m.objectives.f2) << ",";
    for (size_t i = 0; i < m.tour.order.size(); ++i) {
      out << (i > 0 ? " " : "") << m.tour.order[i];
    }
    out << "\n";
  }
  atomic_write(path, out.str());
}

void write_dose_csv(const DoseMap& map, const std::string& path) {
  std::ostringstream out;
  out << "i,j,x,y,z,dose_J_per_m2\n";
  Eigen::Index idx = 0;
  for (int i = 0; i < map.grid.ny; ++i) {
    for (int j = 0; j < map.grid.nx; ++j, ++idx) {
      const Vector3d p = map.grid.cell_centers.col(idx);
      out << i << "," << j << "," << format_double(p.x()) << "," << format_double(p.y()) << ","
          << format_double(p.z()) << "," << format_double(map.dose(idx)) << "\n";
    }
  }
  atomic_write(path, out.str());
}

DoseCsv read_dose_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "i,j,x,y,z,dose_J_per_m2") {
    throw ParseError("bad dose CSV header: " + path);
  }
  DoseCsv rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != 6) throw ParseError("bad dose CSV row: " + path);
    rows.i.push_back(static_cast<int>(parse_double(fields[0], path)));
    rows.j.push_back(static_cast<int>(parse_double(fields[1], path)));
    rows.x.push_back(parse_double(fields[2], path));
    rows.y.push_back(parse_double(fields[3], path));
    rows.z.push_back(parse_double(fields[4], path));
    rows.dose.push_back(parse_double(fields[5], path));
  }
  return rows;
}

void write_dose_csv(const DoseCsv& rows, const std::string& path) {
  std::ostringstream out;
  out << "i,j,x,y,z,dose_J_per_m2\n";
  for (size_t r = 0; r < rows.dose.size(); ++r) {
    out << rows.i[r] << "," << rows.j[r] << "," << format_double(rows.x[r]) << ","
        << format_double(rows.y[r]) << "," << format_double(rows.z[r]) << ","
        << format_double(rows.dose[r]) << "\n";
  }
  atomic_write(path, out.str());
}

void write_heatmap_pgm(const DoseMap& map, const std::string& path) {
  if (map.dose.size() == 0) throw std::invalid_argument("write_heatmap_pgm: empty dose map");
  const double max_dose = map.dose.maxCoeff();
  const double scale = max_dose > 0.0 ? max_dose / 255.0 : 0.0;

  std::ostringstream out;
  out << "P2\n# J_per_m2_per_level " << format_double(scale) << "\n"
      << map.grid.nx << " " << map.grid.ny << "\n255\n";
  Eigen::Index idx = 0;
  for (int i = 0; i < map.grid.ny; ++i) {
    for (int j = 0; j < map.grid.nx; ++j, ++idx) {
      const int level =
          max_dose > 0.0 ? static_cast<int>(std::lround(map.dose(idx) / max_dose * 255.0)) : 0;
      out << level << (j + 1 == map.grid.nx ? "\n" : " ");
    }
  }
  atomic_write(path, out.str());
}

namespace {

json trajectory_to_json(const TimedTrajectory& traj) {
  json samples = json::array();
  for (size_t i = 0; i < traj.times.size(); ++i) {
    json sample = pose3_to_json(traj.poses[i]);
    sample["t"] = traj.times[i];
    samples.push_back(sample);
  }
  return {{"samples", samples}};
}

TimedTrajectory trajectory_from_json(const json& j) {
  TimedTrajectory traj;
  for (const auto& sample : j.at("samples")) {
    traj.times.push_back(sample.at("t").get<double>());
    traj.poses.push_back(pose3_from_json(sample));
  }
  traj.validate();
  return traj;
}

}  // namespace

void write_mission(const Mission& mission, const std::string& path) {
  json legs = json::array();
  for (const auto& leg : mission.base_paths) {
    json poses = json::array();
    for (const Pose2D& p : leg) poses.push_back(pose2_to_json(p));
    legs.push_back(poses);
  }
  json scans = json::array();
  for (const auto& scan : mission.scans) scans.push_back(trajectory_to_json(scan));

  const json doc{{"cell_order", mission.cell_order},
                 {"base_paths", legs},
                 {"scans", scans},
                 {"total_exposure", mission.total_exposure},
                 {"warnings", mission.warnings}};
  atomic_write(path, doc.dump(2) + "\n");
}

Mission read_mission(const std::string& path) {
  const json doc = parse_json_file(path);
  try {
    Mission mission;
    mission.cell_order = doc.at("cell_order").get<std::vector<int>>();
    for (const auto& leg : doc.at("base_paths")) {
      std::vector<Pose2D> poses;
      for (const auto& p : leg) poses.push_back(pose2_from_json(p));
      mission.base_paths.push_back(std::move(poses));
    }
    for (const auto& scan : doc.at("scans")) {
      mission.scans.push_back(trajectory_from_json(scan));
    }
    mission.total_exposure = doc.at("total_exposure").get<double>();
    mission.warnings = doc.at("warnings").get<std::vector<std::string>>();
    return mission;
  } catch (const json::exception& err) {
    throw ParseError(path + ": " + err.what());
  }
}

void write_report(const std::vector<std::pair<int, DisinfectionReport>>& per_surface,
                  const std::string& path) {
  json surfaces = json::array();
  for (const auto& [id, rep] : per_surface) {
    json coverage;
    for (const auto& [name, fraction] : rep.coverage) coverage[name] = fraction;
    surfaces.push_back({{"surface_id", id},
                        {"avg_dose_J_per_m2", rep.avg_dose},
                        {"min_dose_J_per_m2", rep.min_dose},
                        {"exposure_time_s", rep.exposure_time},
                        {"energy_consumption_Wh", rep.energy_consumption},
                        {"dpu", rep.dpu},
                        {"coverage", coverage}});
  }
  atomic_write(path, json{{"surfaces", surfaces}}.dump(2) + "\n");
}

}  // namespace uvplan
