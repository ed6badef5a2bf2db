#include "lodom/simulator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace lodom {

SimulatedScan simulate_scan(const Scene& scene, const Pose& start_pose,
                            const Twist& twist_per_scan,
                            const SensorConfig& cfg,
                            const SimulatorOptions& opts) {
  cfg.validate();
  if (scene.empty()) {
    throw std::invalid_argument("simulate_scan: empty scene");
  }
  if (twist_per_scan.phi.norm() >= M_PI) {
    throw std::invalid_argument(
        "simulate_scan: per-scan rotation must be below pi");
  }

  const int cols = cfg.columns_per_rev;
  const double dir = cfg.clockwise ? -1.0 : 1.0;

  SimulatedScan out;
  out.scan.rings.resize(cfg.ring_count);
  out.column_poses.reserve(cols);

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  for (int j = 0; j < cols; ++j) {
    const double s = static_cast<double>(j) / cols;
    const Pose pose = interpolate(start_pose, twist_per_scan, s);
    out.column_poses.push_back(pose);

    const double az = dir * 2.0 * M_PI * s;
    const double cos_az = std::cos(az);
    const double sin_az = std::sin(az);

    for (int m = 0; m < cfg.ring_count; ++m) {
      const double el = cfg.vertical_angles[m];
      const Eigen::Vector3d d_sensor(std::cos(el) * cos_az,
                                     std::cos(el) * sin_az, std::sin(el));
      const Eigen::Vector3d d_world = pose.rotation * d_sensor;
      const auto t = raycast(scene, pose.translation, d_world);
      double range = t ? *t : -1.0;
      if (range > 0.0 && opts.noise_sigma > 0.0) {
        range += opts.noise_sigma * noise(rng);
      }
      if (range < cfg.min_range || range > cfg.max_range) {
        ++out.rays_missed;
        continue;
      }
      IndexedPoint pt;
      pt.position = range * d_sensor;
      pt.ring = m + 1;
      pt.column = j + 1;
      pt.azimuth_fraction = s;
      out.scan.rings[m].push_back(pt);
    }
  }
  return out;
}

}  // namespace lodom
