#pragma once

#include <cstdint>
#include <vector>

#include "lodom/geometry.hpp"
#include "lodom/pointcloud.hpp"
#include "lodom/scene.hpp"

namespace lodom {

struct SimulatedScan {
  Scan scan;
  /// Exact sensor pose at the capture time of every column (size
  /// columns_per_rev), column j captured at start_pose * exp((j/N) * twist).
  std::vector<Pose> column_poses;
  std::size_t rays_missed = 0;
};

struct SimulatorOptions {
  double noise_sigma = 0.0;  // isotropic Gaussian range noise, m
  std::uint32_t seed = 42;
};

/// Casts one full revolution against the scene while the sensor moves
/// with the given per-scan twist. Nearest hits within
/// [min_range, max_range] are recorded in the sensor frame at capture
/// time. Deterministic: identical inputs give bit-identical output.
/// Throws std::invalid_argument for an empty scene or a twist rotation
/// of magnitude >= pi.
SimulatedScan simulate_scan(const Scene& scene, const Pose& start_pose,
                            const Twist& twist_per_scan,
                            const SensorConfig& cfg,
                            const SimulatorOptions& opts = {});

}  // namespace lodom
