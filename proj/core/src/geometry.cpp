#include "lodom/geometry.hpp"

#include <Eigen/Geometry>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace lodom {

namespace {

// Below this angle the trigonometric coefficient forms lose too many
// digits to cancellation; three series terms keep errors under 1e-12.
constexpr double kSeriesAngle = 1e-4;

}  // namespace

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.rotation = rotation * rhs.rotation;
  out.translation = rotation * rhs.translation + translation;
  if (out.orthonormality_drift() > 1e-7) {
    out = out.renormalized();
  }
  return out;
}

double Pose::rotation_angle() const {
  const double c = 0.5 * (rotation.trace() - 1.0);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double Pose::orthonormality_drift() const {
  const Eigen::Matrix3d e =
      rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
  return e.cwiseAbs().maxCoeff();
}

Pose Pose::renormalized() const {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  Pose out;
  out.rotation = r;
  out.translation = translation;
  return out;
}

Pose exp_se3(const Twist& xi) {
  const double theta = xi.phi.norm();
  const Eigen::Matrix3d phi_hat = skew(xi.phi);
  const Eigen::Matrix3d phi_hat2 = phi_hat * phi_hat;

  // R = I + a*[phi]x + b*[phi]x^2,  V = I + b*[phi]x + c*[phi]x^2
  double a, b, c;
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    c = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  } else {
    const double t2 = theta * theta;
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / t2;
    c = (theta - std::sin(theta)) / (t2 * theta);
  }

  Pose out;
  out.rotation = Eigen::Matrix3d::Identity() + a * phi_hat + b * phi_hat2;
  out.translation =
      (Eigen::Matrix3d::Identity() + b * phi_hat + c * phi_hat2) * xi.rho;
  return out;
}

Twist log_se3(const Pose& T) {
  // Quaternion extraction stays accurate over the whole open ball
  // of radius pi, unlike the antisymmetric-part formula.
  Eigen::Quaterniond q(T.rotation);
  q.normalize();
  if (q.w() < 0.0) {
    q.coeffs() = -q.coeffs();
  }
  const double vec_norm = q.vec().norm();
  const double theta = 2.0 * std::atan2(vec_norm, q.w());
  if (theta >= M_PI - 1e-6) {
    throw std::domain_error(
        "log_se3: rotation angle within 1e-6 of pi, logarithm is ambiguous");
  }

  Twist xi;
  if (vec_norm < 1e-9) {
    xi.phi = 2.0 * q.vec();
  } else {
    xi.phi = (theta / vec_norm) * q.vec();
  }

  const Eigen::Matrix3d phi_hat = skew(xi.phi);
  const Eigen::Matrix3d phi_hat2 = phi_hat * phi_hat;
  double coef;
  if (theta < 1e-2) {
    const double t2 = theta * theta;
    coef = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  } else {
    coef = 1.0 / (theta * theta) -
           (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
  }
  const Eigen::Matrix3d v_inv =
      Eigen::Matrix3d::Identity() - 0.5 * phi_hat + coef * phi_hat2;
  xi.rho = v_inv * T.translation;
  return xi;
}

Pose interpolate(const Pose& T, const Twist& xi, double s) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw std::invalid_argument("interpolate: fraction outside [0, 1]");
  }
  return T * exp_se3(xi.scaled(s));
}

Eigen::Vector3d transform_point(const Pose& T, const Eigen::Vector3d& p) {
  return T * p;
}

PointJacobian point_jacobian(const Pose& T, const Eigen::Vector3d& p) {
  PointJacobian j;
  j.leftCols<3>() = Eigen::Matrix3d::Identity();
  j.rightCols<3>() = -skew(T * p);
  return j;
}

}  // namespace lodom
