#include "uvplan/dose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace uvplan {

SurfaceGrid SurfaceGrid::from_polygon(const SurfacePolygon& polygon, double cell_size) {
  if (cell_size <= 0.0) throw std::invalid_argument("SurfaceGrid: cell_size must be positive");
  if (polygon.vertices.cols() != 4) {
    throw std::invalid_argument("SurfaceGrid: polygon must be a 4-vertex rectangle");
  }
  validate_polygon(polygon);

  const Vector3d v0 = polygon.vertices.col(0);
  Vector3d eu = polygon.vertices.col(1) - v0;
  Vector3d ev = polygon.vertices.col(3) - v0;
  const double len_u = eu.norm(), len_v = ev.norm();
  if (len_u < cell_size || len_v < cell_size) {
    throw std::invalid_argument("SurfaceGrid: rectangle smaller than one cell");
  }
  if (std::abs(eu.dot(ev)) > 1e-6 * len_u * len_v) {
    throw std::invalid_argument("SurfaceGrid: polygon edges are not perpendicular");
  }
  eu /= len_u;
  ev /= len_v;

  SurfaceGrid grid;
  grid.polygon = polygon;
  grid.cell_size = cell_size;
  grid.normal = polygon.unit_normal;
  grid.cell_area = cell_size * cell_size;
  grid.nx = std::max(1, static_cast<int>(std::floor(len_u / cell_size + 1e-9)));
  grid.ny = std::max(1, static_cast<int>(std::floor(len_v / cell_size + 1e-9)));

  // Center the tiled block so every cell center stays inside the rectangle.
  const double margin_u = (len_u - grid.nx * cell_size) / 2.0;
  const double margin_v = (len_v - grid.ny * cell_size) / 2.0;
  grid.cell_centers.resize(3, static_cast<Eigen::Index>(grid.nx) * grid.ny);
  Eigen::Index col = 0;
  for (int i = 0; i < grid.ny; ++i) {
    const double cv = margin_v + (i + 0.5) * cell_size;
    for (int j = 0; j < grid.nx; ++j) {
      const double cu = margin_u + (j + 0.5) * cell_size;
      grid.cell_centers.col(col++) = v0 + cu * eu + cv * ev;
    }
  }
  return grid;
}

void TimedTrajectory::validate() const {
  if (times.size() != poses.size()) {
    throw std::invalid_argument("TimedTrajectory: times/poses size mismatch");
  }
  if (times.size() < 2) throw std::invalid_argument("TimedTrajectory: need at least 2 samples");
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw std::invalid_argument("TimedTrajectory: timestamps must be strictly increasing");
    }
  }
  if (!(duration() > 0.0)) throw std::invalid_argument("TimedTrajectory: duration must be > 0");
}

Pose3D TimedTrajectory::pose_at(double t) const {
  if (poses.empty()) throw std::invalid_argument("TimedTrajectory: empty");
  if (t <= times.front()) return poses.front();
  if (t >= times.back()) return poses.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t hi = static_cast<size_t>(it - times.begin());
  const size_t lo = hi - 1;
  const double s = (t - times[lo]) / (times[hi] - times[lo]);
  return interpolate(poses[lo], poses[hi], s);
}

namespace {

// Flattened emitter list at one rig pose. `lambertian` emitters carry an
// axis; isotropic ones ignore it.
struct EmitterFrame {
  Matrix3Xd positions;
  Matrix3Xd axes;
  Eigen::VectorXd power;
  bool lambertian = true;
};

EmitterFrame emitters_at(const LightSource& src, const Pose3D& rig) {
  EmitterFrame frame;
  if (const auto* panel = std::get_if<LedPanelSource>(&src)) {
    const LedPanelSource posed = panel->transformed(rig);
    frame.positions = posed.led_positions();
    frame.axes = posed.pose.axis().replicate(1, frame.positions.cols());
    frame.power =
        Eigen::VectorXd::Constant(frame.positions.cols(), posed.per_led_radiant_power);
    frame.lambertian = true;
  } else {
    const auto& bank = std::get<TubeLampBankSource>(src);
    const TubeLampBankSource posed = bank.transformed(rig);
    frame.positions = posed.segment_midpoints();
    frame.power = Eigen::VectorXd::Constant(frame.positions.cols(),
                                            posed.per_lamp_radiant_power / posed.segment_count);
    frame.lambertian = false;
  }
  return frame;
}

// Adds weight * irradiance over the cell block [begin, end) for one emitter
// frame. Vectorized over cells; all cells share `normal`.
void accumulate_block(const EmitterFrame& frame, const Matrix3Xd& cells, const Vector3d& normal,
                      double weight, Eigen::Index begin, Eigen::Index end, Eigen::VectorXd& dose) {
  const Eigen::Index count = end - begin;
  const auto block = cells.middleCols(begin, count);
  for (Eigen::Index e = 0; e < frame.positions.cols(); ++e) {
    const Vector3d pos = frame.positions.col(e);
    Eigen::Matrix3Xd diff = block.colwise() - pos;
    Eigen::ArrayXd d2 = diff.colwise().squaredNorm().transpose().array();
    if ((d2 <= 0.0).any()) {
      throw std::runtime_error("simulate_dose: cell coincides with an emitter");
    }
    Eigen::ArrayXd cos_i_num = (-(normal.transpose() * diff)).transpose().array();
    if (frame.lambertian) {
      Eigen::ArrayXd cos_e_num = (frame.axes.col(e).transpose() * diff).transpose().array();
      dose.segment(begin, count).array() +=
          (weight * frame.power(e) / kPi) * cos_e_num.max(0.0) * cos_i_num.max(0.0) / (d2 * d2);
    } else {
      dose.segment(begin, count).array() +=
          (weight * frame.power(e) / (4.0 * kPi)) * cos_i_num.max(0.0) / (d2 * d2.sqrt());
    }
  }
}

}  // namespace

DoseMap simulate_dose(const std::vector<LightSource>& sources, const TimedTrajectory& traj,
                      const SurfaceGrid& grid, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("simulate_dose: dt must be positive");
  if (grid.cell_count() == 0) throw std::invalid_argument("simulate_dose: empty surface grid");
  traj.validate();
  const double duration = traj.duration();
  if (duration < dt) throw std::invalid_argument("simulate_dose: trajectory shorter than dt");

  // Left-endpoint rule; the final partial step keeps the weights summing to
  // the exact duration.
  const long full_steps = static_cast<long>(std::floor(duration / dt + 1e-12));
  const double remainder = duration - full_steps * dt;
  const bool partial = remainder > 1e-12 * duration;
  const long steps = full_steps + (partial ? 1 : 0);

  std::vector<Pose3D> rig_poses(static_cast<size_t>(steps));
  std::vector<double> weights(static_cast<size_t>(steps), dt);
  for (long k = 0; k < steps; ++k) {
    rig_poses[static_cast<size_t>(k)] = traj.pose_at(traj.times.front() + k * dt);
  }
  if (partial) weights.back() = remainder;

  const Eigen::Index n_cells = grid.cell_count();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const Eigen::Index n_blocks = std::min<Eigen::Index>(static_cast<Eigen::Index>(hw), n_cells);

  DoseMap map;
  map.grid = grid;
  map.dose = Eigen::VectorXd::Zero(n_cells);

  // Per-source accumulation keeps source superposition exact; cells are
  // independent, so blocks run in parallel without coordination.
  for (const LightSource& src : sources) {
    Eigen::VectorXd source_dose = Eigen::VectorXd::Zero(n_cells);
    auto worker = [&](Eigen::Index begin, Eigen::Index end) {
      for (long k = 0; k < steps; ++k) {
        const EmitterFrame frame = emitters_at(src, rig_poses[static_cast<size_t>(k)]);
        accumulate_block(frame, grid.cell_centers, grid.normal, weights[static_cast<size_t>(k)],
                         begin, end, source_dose);
      }
    };
    if (n_blocks <= 1) {
      worker(0, n_cells);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<size_t>(n_blocks));
      const Eigen::Index chunk = (n_cells + n_blocks - 1) / n_blocks;
      for (Eigen::Index b = 0; b < n_blocks; ++b) {
        const Eigen::Index begin = b * chunk;
        const Eigen::Index end = std::min(n_cells, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(worker, begin, end);
      }
      for (auto& t : pool) t.join();
    }
    map.dose += source_dose;
  }
  return map;
}

DisinfectionReport report(const DoseMap& map, const std::vector<LightSource>& sources,
                          double exposure_time, const PathogenDoseTable& pathogens) {
  if (map.dose.size() == 0) throw std::invalid_argument("report: empty dose map");
  if (exposure_time <= 0.0) throw std::invalid_argument("report: exposure_time must be > 0");

  DisinfectionReport rep;
  rep.avg_dose = map.dose.mean();
  rep.min_dose = map.dose.minCoeff();
  rep.exposure_time = exposure_time;
  rep.energy_consumption = electrical_power(sources) * exposure_time / 3600.0;
  rep.dpu = rep.avg_dose / rep.energy_consumption;
  for (const auto& [name, threshold] : pathogens.required) {
    if (threshold <= 0.0) throw std::invalid_argument("report: pathogen threshold must be > 0");
    const Eigen::Index hit = (map.dose.array() >= threshold).count();
    rep.coverage[name] = static_cast<double>(hit) / static_cast<double>(map.dose.size());
  }
  return rep;
}

double conservation_check(const DoseMap& map, const std::vector<LightSource>& sources,
                          double exposure_time) {
  const double power = radiant_power(sources);
  if (power <= 0.0) throw std::invalid_argument("conservation_check: zero radiant power");
  if (exposure_time <= 0.0) {
    throw std::invalid_argument("conservation_check: exposure_time must be > 0");
  }
  return map.dose.sum() * map.grid.cell_area / (power * exposure_time);
}

}  // namespace uvplan
