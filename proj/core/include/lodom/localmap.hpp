#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "lodom/features.hpp"
#include "lodom/geometry.hpp"
#include "lodom/kdtree.hpp"

namespace lodom {

struct LineLandmark {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();  // unit
};

struct PlaneLandmark {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();  // unit
};

struct KeyframePolicy {
  double translation_threshold = 0.5;  // m
  double rotation_threshold = 0.175;   // rad (~10 deg)
  bool every_frame = false;
};

struct MapConfig {
  double edge_leaf = 0.4;   // m, edge-map voxel edge length
  double plane_leaf = 0.8;  // m, plane-map voxel edge length
};

/// Covariance eigen-fit of a line through >= 3 points. Degenerate
/// (nullopt) unless the largest eigenvalue dominates the second by the
/// given ratio; the direction is the dominant eigenvector and the
/// center the arithmetic mean.
std::optional<LineLandmark> fit_line(std::span<const Eigen::Vector3d> points,
                                     double eigenvalue_ratio = 3.0);

/// Covariance eigen-fit of a plane through >= 3 points. Degenerate
/// unless the middle eigenvalue dominates the smallest by the given
/// ratio; the normal is the eigenvector of the smallest eigenvalue.
std::optional<PlaneLandmark> fit_plane(std::span<const Eigen::Vector3d> points,
                                       double eigenvalue_ratio = 3.0);

/// One representative per occupied voxel (the centroid of the voxel's
/// points), output sorted by voxel key.
std::vector<Eigen::Vector3d> voxel_downsample(
    std::span<const Eigen::Vector3d> points, double leaf);

/// Global edge and plane feature maps in the world frame, each behind an
/// exact k-d tree that is rebuilt after keyframe insertion. Single
/// writer; reads must not overlap writes.
class FeatureMap {
 public:
  enum class Side { kEdge, kPlane };

  explicit FeatureMap(MapConfig cfg = {}) : cfg_(cfg) {}

  std::size_t size(Side side) const { return tree(side).size(); }
  bool empty() const {
    return tree(Side::kEdge).empty() && tree(Side::kPlane).empty();
  }
  const std::vector<Eigen::Vector3d>& points(Side side) const {
    return tree(side).points();
  }

  /// The min(k, size) nearest stored points, ascending by distance.
  /// An empty side yields an empty result.
  std::vector<Eigen::Vector3d> knn(Side side, const Eigen::Vector3d& query,
                                   int k) const;
  void knn(Side side, const Eigen::Vector3d& query, int k,
           std::vector<Eigen::Vector3d>& neighbors,
           std::vector<double>& sq_dists) const;

  /// Transforms the features into the world frame, appends them, voxel
  /// downsamples both sides and rebuilds the indices.
  void insert(const FeatureCloud& features, const Pose& pose);

  /// Keyframe-gated insert: only when the pose delta versus the last
  /// keyframe exceeds a threshold (or every_frame is set). Returns
  /// whether insertion happened.
  bool maybe_insert(const FeatureCloud& features, const Pose& pose,
                    const Pose& last_keyframe_pose,
                    const KeyframePolicy& policy);

  /// One point per line: "E x y z" or "S x y z".
  void dump(std::ostream& out) const;

  const MapConfig& config() const { return cfg_; }

 private:
  const KdTree3& tree(Side side) const {
    return side == Side::kEdge ? edge_tree_ : plane_tree_;
  }

  MapConfig cfg_;
  KdTree3 edge_tree_;
  KdTree3 plane_tree_;
};

}  // namespace lodom
