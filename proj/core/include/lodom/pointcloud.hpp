#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lodom/geometry.hpp"

namespace lodom {

struct RawPoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  float intensity = 0.0f;
};

/// One measurement with its place in the scan grid. Ring index m and
/// column index n are 1-based; azimuth_fraction s in [0,1) is the
/// fraction of the scan period elapsed when the point was captured
/// (s = (n-1)/N_m on a dense column grid).
struct IndexedPoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  int ring = 1;
  int column = 1;
  double azimuth_fraction = 0.0;
};

/// One full revolution of the beam array, bucketed per ring. Within each
/// ring points are ordered by strictly increasing azimuth fraction.
struct Scan {
  std::vector<std::vector<IndexedPoint>> rings;
  int scan_index = 0;

  int ring_count() const { return static_cast<int>(rings.size()); }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& r : rings) n += r.size();
    return n;
  }
};

struct SensorConfig {
  int ring_count = 16;
  std::vector<double> vertical_angles;  // rad, strictly increasing
  int columns_per_rev = 1800;
  double min_range = 0.5;   // m
  double max_range = 100.0; // m
  bool clockwise = false;

  /// Evenly spaced vertical angles between min_deg and max_deg.
  static SensorConfig Uniform(int rings, double min_deg, double max_deg,
                              int columns, double min_range, double max_range,
                              bool clockwise = false);

  /// Throws std::invalid_argument when angles are not strictly
  /// increasing or the range interval is empty.
  void validate() const;
};

struct IngestStats {
  std::size_t nan_dropped = 0;
  std::size_t range_dropped = 0;
  std::size_t degenerate_dropped = 0;
};

/// Fraction of a revolution from start_azimuth to the point's azimuth,
/// measured along the rotation direction. Throws std::invalid_argument
/// when x and y are both zero.
double azimuth_fraction(const Eigen::Vector3d& p, bool clockwise,
                        double start_azimuth = 0.0);

/// Parses the KITTI velodyne layout: consecutive little-endian float32
/// quadruples (x, y, z, intensity), no header. Points are bucketed into
/// the ring with the nearest vertical angle (ties toward the lower
/// ring), ordered by azimuth fraction relative to the first retained
/// point, and filtered to [min_range, max_range]. Throws
/// std::runtime_error when the byte count is not a multiple of 16.
Scan read_kitti_bin(std::span<const std::byte> bytes, const SensorConfig& cfg,
                    IngestStats* stats = nullptr);

/// Serializes a scan back to the KITTI binary layout, points in capture
/// order (column-major), intensity zero.
std::vector<std::byte> write_kitti_bin(const Scan& scan);

}  // namespace lodom
