#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "lodom/pointcloud.hpp"

namespace lodom {

/// Which reading of the local-smoothness statistic to use. The norm of
/// the summed difference vectors vanishes on flat surfaces and is the
/// default; the mean of the individual difference norms is kept for
/// comparison.
enum class SmoothnessForm { kNormOfSum, kMeanOfNorms };

struct FeaturePoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // sensor frame, m
  double sigma = 0.0;                                  // smoothness, m
  double azimuth_fraction = 0.0;
  int ring = 1;
  int column = 1;
};

struct FeatureCloud {
  std::vector<FeaturePoint> edges;
  std::vector<FeaturePoint> planars;
};

struct FeatureConfig {
  int neighbor_half_width = 5;
  double edge_sigma_min = 0.1;     // m
  double planar_sigma_max = 0.03;  // m
  int sectors_per_ring = 6;
  int max_edges_per_sector = 2;
  int max_planars_per_sector = 4;
  SmoothnessForm smoothness_form = SmoothnessForm::kNormOfSum;
  /// Columns whose neighborhood spans a range discontinuity larger than
  /// this factor times the median local spacing are excluded from edge
  /// candidacy (occlusion edges are viewpoint artifacts).
  double occlusion_gap_factor = 1.5;

  void validate() const;
};

/// Local smoothness at 0-based position `index` within one ring. The
/// neighborhood is the 2*half_width adjacent columns; the position must
/// have a full neighborhood on both sides.
double smoothness(std::span<const IndexedPoint> ring, int index,
                  const FeatureConfig& cfg);

/// Per ring, columns are split into equal azimuth sectors; within each
/// sector the highest-sigma columns at or above edge_sigma_min become
/// edges and the lowest-sigma columns at or below planar_sigma_max
/// become planars, up to the per-sector caps. Ties in sigma break toward
/// the lower column index. Output is sorted by (ring, column).
FeatureCloud extract_features(const Scan& scan, const FeatureConfig& cfg);

}  // namespace lodom
