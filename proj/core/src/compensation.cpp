#include "lodom/compensation.hpp"

namespace lodom {

void MotionState::update(const Pose& new_pose) {
  pose_prev2 = pose_prev;
  pose_prev = new_pose;
  ++scans_seen;
  predicted_twist =
      scans_seen >= 2 ? predict_twist(pose_prev2, pose_prev) : Twist::Zero();
}

Twist predict_twist(const Pose& pose_prev2, const Pose& pose_prev) {
  return log_se3(pose_prev2.inverse() * pose_prev);
}

namespace {

template <typename PointT>
std::vector<PointT> apply_deskew(std::span<const PointT> points,
                                 const Twist& xi) {
  std::vector<PointT> out(points.begin(), points.end());
  if (xi.rho.isZero(0.0) && xi.phi.isZero(0.0)) {
    return out;  // bit-identical passthrough
  }
  for (auto& p : out) {
    const Pose correction = exp_se3(xi.scaled(p.azimuth_fraction));
    p.position = correction * p.position;
  }
  return out;
}

}  // namespace

std::vector<FeaturePoint> undistort(std::span<const FeaturePoint> points,
                                    const Twist& xi) {
  return apply_deskew(points, xi);
}

std::vector<IndexedPoint> undistort(std::span<const IndexedPoint> points,
                                    const Twist& xi) {
  return apply_deskew(points, xi);
}

std::vector<FeaturePoint> recompute_undistort(
    std::span<const FeaturePoint> raw_points, const Pose& pose_prev,
    const Pose& pose_star) {
  const Twist refined = predict_twist(pose_prev, pose_star);
  return apply_deskew(raw_points, refined);
}

}  // namespace lodom
