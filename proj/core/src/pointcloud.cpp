#include "lodom/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace lodom {

SensorConfig SensorConfig::Uniform(int rings, double min_deg, double max_deg,
                                   int columns, double min_range,
                                   double max_range, bool clockwise) {
  SensorConfig cfg;
  cfg.ring_count = rings;
  cfg.vertical_angles.resize(rings);
  const double lo = min_deg * M_PI / 180.0;
  const double hi = max_deg * M_PI / 180.0;
  for (int i = 0; i < rings; ++i) {
    const double t = rings > 1 ? static_cast<double>(i) / (rings - 1) : 0.5;
    cfg.vertical_angles[i] = lo + t * (hi - lo);
  }
  cfg.columns_per_rev = columns;
  cfg.min_range = min_range;
  cfg.max_range = max_range;
  cfg.clockwise = clockwise;
  cfg.validate();
  return cfg;
}

void SensorConfig::validate() const {
  if (ring_count <= 0 ||
      vertical_angles.size() != static_cast<std::size_t>(ring_count)) {
    throw std::invalid_argument("SensorConfig: ring count mismatch");
  }
  for (std::size_t i = 1; i < vertical_angles.size(); ++i) {
    if (!(vertical_angles[i] > vertical_angles[i - 1])) {
      throw std::invalid_argument(
          "SensorConfig: vertical angles must be strictly increasing");
    }
  }
  if (!(min_range > 0.0 && min_range < max_range)) {
    throw std::invalid_argument("SensorConfig: need 0 < min_range < max_range");
  }
  if (columns_per_rev <= 0) {
    throw std::invalid_argument("SensorConfig: columns_per_rev must be > 0");
  }
}

double azimuth_fraction(const Eigen::Vector3d& p, bool clockwise,
                        double start_azimuth) {
  if (p.x() == 0.0 && p.y() == 0.0) {
    throw std::invalid_argument("azimuth_fraction: point on the rotation axis");
  }
  const double a = std::atan2(p.y(), p.x());
  double rel = clockwise ? (start_azimuth - a) : (a - start_azimuth);
  const double two_pi = 2.0 * M_PI;
  rel = std::fmod(rel, two_pi);
  if (rel < 0.0) rel += two_pi;
  double s = rel / two_pi;
  if (s >= 1.0) s = 0.0;
  return s;
}

namespace {

int nearest_ring(const std::vector<double>& angles, double elevation) {
  // Ties break toward the lower ring.
  int best = 0;
  double best_dist = std::abs(elevation - angles[0]);
  for (std::size_t i = 1; i < angles.size(); ++i) {
    const double d = std::abs(elevation - angles[i]);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

Scan read_kitti_bin(std::span<const std::byte> bytes, const SensorConfig& cfg,
                    IngestStats* stats) {
  cfg.validate();
  if (bytes.size() % 16 != 0) {
    throw std::runtime_error(
        "read_kitti_bin: byte count is not a multiple of 16");
  }

  IngestStats local;
  Scan scan;
  scan.rings.resize(cfg.ring_count);

  const std::size_t count = bytes.size() / 16;
  bool have_start = false;
  double start_azimuth = 0.0;

  for (std::size_t i = 0; i < count; ++i) {
    float f[4];
    std::memcpy(f, bytes.data() + 16 * i, 16);
    const Eigen::Vector3d p(f[0], f[1], f[2]);
    if (!p.allFinite()) {
      ++local.nan_dropped;
      continue;
    }
    if (p.x() == 0.0 && p.y() == 0.0) {
      ++local.degenerate_dropped;
      continue;
    }
    const double range = p.norm();
    if (range < cfg.min_range || range > cfg.max_range) {
      ++local.range_dropped;
      continue;
    }
    if (!have_start) {
      start_azimuth = std::atan2(p.y(), p.x());
      have_start = true;
    }
    IndexedPoint pt;
    pt.position = p;
    pt.azimuth_fraction = azimuth_fraction(p, cfg.clockwise, start_azimuth);
    const double elevation = std::atan2(p.z(), std::hypot(p.x(), p.y()));
    pt.ring = nearest_ring(cfg.vertical_angles, elevation) + 1;
    scan.rings[pt.ring - 1].push_back(pt);
  }

  for (auto& ring : scan.rings) {
    std::stable_sort(ring.begin(), ring.end(),
                     [](const IndexedPoint& a, const IndexedPoint& b) {
                       return a.azimuth_fraction < b.azimuth_fraction;
                     });
    // Strict monotonicity: drop later duplicates of an azimuth fraction.
    std::vector<IndexedPoint> kept;
    kept.reserve(ring.size());
    for (const auto& pt : ring) {
      if (!kept.empty() &&
          kept.back().azimuth_fraction == pt.azimuth_fraction) {
        ++local.degenerate_dropped;
        continue;
      }
      kept.push_back(pt);
    }
    ring = std::move(kept);
    for (std::size_t n = 0; n < ring.size(); ++n) {
      ring[n].column = static_cast<int>(n) + 1;
    }
  }

  if (stats) *stats = local;
  return scan;
}

std::vector<std::byte> write_kitti_bin(const Scan& scan) {
  // Capture order: by column, then ring.
  std::vector<const IndexedPoint*> pts;
  pts.reserve(scan.size());
  for (const auto& ring : scan.rings) {
    for (const auto& p : ring) pts.push_back(&p);
  }
  std::sort(pts.begin(), pts.end(),
            [](const IndexedPoint* a, const IndexedPoint* b) {
              if (a->azimuth_fraction != b->azimuth_fraction) {
                return a->azimuth_fraction < b->azimuth_fraction;
              }
              return a->ring < b->ring;
            });

  std::vector<std::byte> out(16 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const float f[4] = {static_cast<float>(pts[i]->position.x()),
                        static_cast<float>(pts[i]->position.y()),
                        static_cast<float>(pts[i]->position.z()), 0.0f};
    std::memcpy(out.data() + 16 * i, f, 16);
  }
  return out;
}

}  // namespace lodom
