#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <random>

#include "lodom/geometry.hpp"
#include "support/test_helpers.hpp"

using namespace lodom;

TEST_CASE("skew of the zero vector is the zero matrix") {
  CHECK(skew(Eigen::Vector3d::Zero()).isZero(0.0));
}

TEST_CASE("skew of a basis vector matches the cross-product identity") {
  Eigen::Matrix3d expected;
  expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK((skew({1, 0, 0}) - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("skew(v) * w equals v x w for random vectors") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d v(uni(rng), uni(rng), uni(rng));
    const Eigen::Vector3d w(uni(rng), uni(rng), uni(rng));
    CHECK((skew(v) * w - v.cross(w)).norm() < 1e-12);
  }
}

TEST_CASE("exp of the zero twist is the identity pose") {
  const Pose T = exp_se3(Twist::Zero());
  CHECK(T.is_approx(Pose::Identity(), 0.0));
}

TEST_CASE("exp of a pure translation keeps the rotation identity") {
  Twist xi;
  xi.rho = {1, 2, 3};
  const Pose T = exp_se3(xi);
  CHECK(T.rotation.isIdentity(1e-15));
  CHECK((T.translation - Eigen::Vector3d(1, 2, 3)).norm() < 1e-15);
}

TEST_CASE("exp/log roundtrip over 1000 seeded twists with angle <= 3 rad") {
  std::mt19937 rng(42);
  for (int i = 0; i < 1000; ++i) {
    const Twist xi = testing::random_twist(rng, 3.0, 50.0);
    const Twist back = log_se3(exp_se3(xi));
    CHECK((back.vector() - xi.vector()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("log of the identity is the zero twist") {
  CHECK(log_se3(Pose::Identity()).vector().isZero(0.0));
}

TEST_CASE("log of a pure translation") {
  Pose T;
  T.translation = {0.5, 0, 0};
  const Twist xi = log_se3(T);
  CHECK(xi.phi.isZero(1e-15));
  CHECK((xi.rho - Eigen::Vector3d(0.5, 0, 0)).norm() < 1e-15);
}

TEST_CASE("log of 90 degree yaw plus unit x translation re-exponentiates") {
  Pose T;
  T.rotation = Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()).matrix();
  T.translation = {1, 0, 0};
  const Pose back = exp_se3(log_se3(T));
  CHECK(back.is_approx(T, 1e-9));
}

TEST_CASE("log throws near a pi rotation") {
  Pose T;
  T.rotation =
      Eigen::AngleAxisd(M_PI - 1e-9, Eigen::Vector3d::UnitX()).matrix();
  CHECK_THROWS_AS(log_se3(T), std::domain_error);
}

TEST_CASE("composition consistency: A * exp(log(A^-1 B)) = B") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Pose a = testing::random_pose(rng, 2.5, 20.0);
    const Pose b = testing::random_pose(rng, 2.5, 20.0);
    const Twist xi = log_se3(a.inverse() * b);
    CHECK((a * exp_se3(xi)).is_approx(b, 1e-9));
  }
}

TEST_CASE("interpolate endpoints") {
  std::mt19937 rng(3);
  const Pose T = testing::random_pose(rng, 1.0, 5.0);
  const Twist xi = testing::random_twist(rng, 1.0, 2.0);
  CHECK(interpolate(T, xi, 0.0).is_approx(T, 0.0));
  CHECK(interpolate(T, xi, 1.0).is_approx(T * exp_se3(xi), 1e-12));
}

TEST_CASE("interpolate midpoint of a pure rotation matches quaternion slerp") {
  std::mt19937 rng(5);
  const Pose T = testing::random_pose(rng, 1.0, 5.0);
  Twist xi;
  xi.phi = testing::random_unit_vector(rng) * (60.0 * M_PI / 180.0);

  const Pose mid = interpolate(T, xi, 0.5);
  const Pose rel = T.inverse() * mid;

  // Slerp between identity and the full rotation is the geodesic.
  const Eigen::Quaterniond q_full(exp_se3(xi).rotation);
  const Eigen::Quaterniond q_mid =
      Eigen::Quaterniond::Identity().slerp(0.5, q_full);
  CHECK((rel.rotation - q_mid.matrix()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rel.rotation_angle() == doctest::Approx(30.0 * M_PI / 180.0));
}

TEST_CASE("interpolate rejects fractions outside [0, 1]") {
  CHECK_THROWS_AS(interpolate(Pose::Identity(), Twist::Zero(), -0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(interpolate(Pose::Identity(), Twist::Zero(), 1.1),
                  std::invalid_argument);
}

TEST_CASE("interpolate is continuous in the fraction") {
  std::mt19937 rng(9);
  const Pose T = testing::random_pose(rng, 1.0, 5.0);
  const Twist xi = testing::random_twist(rng, 1.5, 3.0);
  const double ds = 1e-3;
  // Adjacent samples differ by O(ds) in both blocks.
  const double bound = ds * (xi.phi.norm() + xi.rho.norm() + 1.0) * 10.0;
  for (double s = 0.0; s + ds <= 1.0; s += 0.05) {
    const Pose a = interpolate(T, xi, s);
    const Pose b = interpolate(T, xi, s + ds);
    CHECK((a.rotation - b.rotation).cwiseAbs().maxCoeff() < bound);
    CHECK((a.translation - b.translation).norm() < bound);
  }
}

TEST_CASE("transform_point basics") {
  CHECK((transform_point(Pose::Identity(), {1, 2, 3}) -
         Eigen::Vector3d(1, 2, 3))
            .norm() == 0.0);
  Pose shift;
  shift.translation = {1, 0, 0};
  CHECK((transform_point(shift, {0, 0, 0}) - Eigen::Vector3d(1, 0, 0)).norm() ==
        0.0);
}

TEST_CASE("transform_point is an isometry") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uni(-20.0, 20.0);
  for (int i = 0; i < 100; ++i) {
    const Pose T = testing::random_pose(rng, 3.0, 10.0);
    const Eigen::Vector3d p(uni(rng), uni(rng), uni(rng));
    const Eigen::Vector3d q(uni(rng), uni(rng), uni(rng));
    CHECK((transform_point(T, p) - transform_point(T, q)).norm() ==
          doctest::Approx((p - q).norm()).epsilon(1e-12));
  }
}

TEST_CASE("point_jacobian closed forms") {
  const PointJacobian j0 = point_jacobian(Pose::Identity(), {0, 0, 0});
  CHECK(j0.leftCols<3>().isIdentity(0.0));
  CHECK(j0.rightCols<3>().isZero(0.0));

  const PointJacobian j1 = point_jacobian(Pose::Identity(), {0, 0, 1});
  CHECK((j1.rightCols<3>() + skew({0, 0, 1})).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("point_jacobian matches central finite differences") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const Pose T = testing::random_pose(rng, 3.0, 10.0);
    const Eigen::Vector3d p = testing::random_unit_vector(rng) *
                              (std::abs(uni(rng)) * 100.0);
    const PointJacobian j = point_jacobian(T, p);

    for (int axis = 0; axis < 6; ++axis) {
      Eigen::Matrix<double, 6, 1> delta = Eigen::Matrix<double, 6, 1>::Zero();
      delta[axis] = eps;
      const Eigen::Vector3d plus = exp_se3(Twist::FromVector(delta)) * T * p;
      const Eigen::Vector3d minus = exp_se3(Twist::FromVector(-delta)) * T * p;
      const Eigen::Vector3d fd = (plus - minus) / (2.0 * eps);
      CHECK((j.col(axis) - fd).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("composition keeps the rotation orthonormal over long chains") {
  std::mt19937 rng(23);
  Pose T = Pose::Identity();
  for (int i = 0; i < 5000; ++i) {
    T = T * testing::random_pose(rng, 0.3, 0.1);
  }
  CHECK(T.orthonormality_drift() < 1e-7 + 1e-12);
}

TEST_CASE("renormalized projects a drifted rotation back to SO(3)") {
  std::mt19937 rng(29);
  Pose T = testing::random_pose(rng, 1.0, 1.0);
  T.rotation(0, 1) += 3e-6;  // inject drift above the re-projection gate
  REQUIRE(T.orthonormality_drift() > 1e-7);
  const Pose fixed = (T * Pose::Identity());
  CHECK(fixed.orthonormality_drift() < 1e-12);
}
