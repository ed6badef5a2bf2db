#pragma once

#include <vector>

#include "lodom/features.hpp"
#include "lodom/geometry.hpp"

namespace lodom {

enum class CompensationMode { kNone, kTwoStage };

/// Constant-velocity recurrence state: poses at the two previous scans
/// and the twist predicted from them (zero until two poses exist).
struct MotionState {
  Pose pose_prev2 = Pose::Identity();
  Pose pose_prev = Pose::Identity();
  Twist predicted_twist;
  int scans_seen = 0;

  void update(const Pose& new_pose);
};

/// Relative motion between two consecutive poses:
/// log(prev2^-1 * prev). Propagates std::domain_error when the relative
/// rotation is within 1e-6 of pi.
Twist predict_twist(const Pose& pose_prev2, const Pose& pose_prev);

/// Projects every point into the scan-start frame by applying
/// exp(s * xi) at its azimuth fraction s. Sigma/ring/fraction metadata
/// and list order are preserved.
std::vector<FeaturePoint> undistort(std::span<const FeaturePoint> points,
                                    const Twist& xi);
std::vector<IndexedPoint> undistort(std::span<const IndexedPoint> points,
                                    const Twist& xi);

/// Stage-2 correction: recomputes the deskew from the optimized pose,
/// applying exp(s * log(T_prev^-1 * T_star)) to the ORIGINAL
/// (stage-1-uncorrected) coordinates.
std::vector<FeaturePoint> recompute_undistort(
    std::span<const FeaturePoint> raw_points, const Pose& pose_prev,
    const Pose& pose_star);

}  // namespace lodom
