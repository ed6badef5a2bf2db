#pragma once

#include <Eigen/Core>

namespace lodom {

/// Tangent-space element of SE(3): translational part rho (m) and
/// rotational part phi (rad), stacked as a 6-vector [rho; phi].
struct Twist {
  Eigen::Vector3d rho = Eigen::Vector3d::Zero();
  Eigen::Vector3d phi = Eigen::Vector3d::Zero();

  static Twist Zero() { return {}; }

  static Twist FromVector(const Eigen::Matrix<double, 6, 1>& v) {
    return {v.head<3>(), v.tail<3>()};
  }

  Eigen::Matrix<double, 6, 1> vector() const {
    Eigen::Matrix<double, 6, 1> v;
    v << rho, phi;
    return v;
  }

  Twist scaled(double s) const { return {s * rho, s * phi}; }
  Twist negated() const { return {-rho, -phi}; }
  double norm() const { return vector().norm(); }
  bool all_finite() const { return rho.allFinite() && phi.allFinite(); }
};

/// Rigid transform on SE(3): x_out = rotation * x_in + translation.
/// The rotation block is kept orthonormal; composition re-projects via
/// polar decomposition once accumulated drift exceeds 1e-7.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  static Pose Identity() { return {}; }

  Pose inverse() const {
    Pose out;
    out.rotation = rotation.transpose();
    out.translation = -(out.rotation * translation);
    return out;
  }

  Pose operator*(const Pose& rhs) const;

  Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
  }

  /// Rotation angle in [0, pi].
  double rotation_angle() const;

  /// Max-abs deviation of R^T R from the identity.
  double orthonormality_drift() const;

  /// Nearest orthonormal rotation (polar projection), translation kept.
  Pose renormalized() const;

  bool is_approx(const Pose& other, double tol) const {
    return (rotation - other.rotation).cwiseAbs().maxCoeff() <= tol &&
           (translation - other.translation).cwiseAbs().maxCoeff() <= tol;
  }
};

/// 3x6 derivative of exp(dxi) * T * p w.r.t. dxi under the left
/// perturbation model; the left 3x3 block is exactly the identity.
using PointJacobian = Eigen::Matrix<double, 3, 6>;

/// Skew-symmetric matrix with skew(v) * w == v x w.
Eigen::Matrix3d skew(const Eigen::Vector3d& v);

/// Closed-form SE(3) exponential (Rodrigues rotation plus left-Jacobian
/// translation). A series branch handles small rotation angles.
Pose exp_se3(const Twist& xi);

/// SE(3) logarithm. Throws std::domain_error when the rotation angle is
/// within 1e-6 of pi (ambiguous axis).
Twist log_se3(const Pose& T);

/// Pose at fraction s in [0, 1] along the twist: T * exp(s * xi).
/// Throws std::invalid_argument for s outside [0, 1].
Pose interpolate(const Pose& T, const Twist& xi, double s);

Eigen::Vector3d transform_point(const Pose& T, const Eigen::Vector3d& p);

PointJacobian point_jacobian(const Pose& T, const Eigen::Vector3d& p);

}  // namespace lodom
