#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "lodom/eval.hpp"
#include "support/test_helpers.hpp"

using namespace lodom;

namespace {

Trajectory straight_line(int count, double step_x, double overshoot = 0.0) {
  Trajectory traj;
  for (int i = 0; i < count; ++i) {
    Pose pose;
    pose.translation = {i * (step_x + overshoot), 0, 0};
    traj.poses.emplace_back(i, pose);
  }
  return traj;
}

Trajectory random_walk(std::mt19937& rng, int count) {
  Trajectory traj;
  Pose pose = Pose::Identity();
  for (int i = 0; i < count; ++i) {
    traj.poses.emplace_back(i, pose);
    pose = pose * testing::random_pose(rng, 0.1, 1.0);
  }
  return traj;
}

}  // namespace

TEST_CASE("identical trajectories give zero error") {
  std::mt19937 rng(3);
  const Trajectory traj = random_walk(rng, 100);
  const double lengths[] = {5.0, 10.0, 20.0};
  const ErrorReport report = evaluate(traj, traj, lengths);
  CHECK(report.pair_count > 0);
  CHECK(report.ate_percent == doctest::Approx(0.0).epsilon(1e-12));
  // acos((trace-1)/2) bottoms out near 1e-8 rad for the identity.
  CHECK(report.are_deg_per_m < 1e-6);
}

TEST_CASE("a common gauge applied to both trajectories cancels") {
  std::mt19937 rng(5);
  const Trajectory gt = random_walk(rng, 80);
  Trajectory est = gt;
  // Perturb the estimate slightly so the errors are nonzero.
  std::mt19937 rng2(7);
  for (auto& [index, pose] : est.poses) {
    pose = pose * testing::random_pose(rng2, 0.002, 0.01);
  }

  const double lengths[] = {5.0, 10.0};
  const ErrorReport base = evaluate(est, gt, lengths);
  REQUIRE(base.pair_count > 0);
  REQUIRE(base.ate_percent > 0.0);

  const Pose gauge = testing::random_pose(rng, 2.0, 50.0);
  Trajectory est_g = est;
  Trajectory gt_g = gt;
  for (auto& [index, pose] : est_g.poses) pose = gauge * pose;
  for (auto& [index, pose] : gt_g.poses) pose = gauge * pose;
  const ErrorReport moved = evaluate(est_g, gt_g, lengths);
  CHECK(moved.ate_percent == doctest::Approx(base.ate_percent).epsilon(1e-9));
  CHECK(moved.are_deg_per_m ==
        doctest::Approx(base.are_deg_per_m).epsilon(1e-9));
}

TEST_CASE("a constant left offset of the estimate alone also cancels") {
  std::mt19937 rng(11);
  const Trajectory gt = random_walk(rng, 60);
  const Pose offset = testing::random_pose(rng, 1.0, 20.0);
  Trajectory est = gt;
  for (auto& [index, pose] : est.poses) pose = offset * pose;

  const double lengths[] = {5.0};
  const ErrorReport report = evaluate(est, gt, lengths);
  CHECK(report.pair_count > 0);
  CHECK(report.ate_percent == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(report.are_deg_per_m < 1e-6);
}

TEST_CASE("two-pose overshoot fixture evaluates to exactly 1 percent") {
  Trajectory gt, est;
  gt.poses.emplace_back(0, Pose::Identity());
  est.poses.emplace_back(0, Pose::Identity());
  Pose g, e;
  g.translation = {100.0, 0, 0};
  e.translation = {101.0, 0, 0};
  gt.poses.emplace_back(1, g);
  est.poses.emplace_back(1, e);

  const double lengths[] = {100.0};
  const ErrorReport report = evaluate(est, gt, lengths);
  REQUIRE(report.pair_count == 1);
  CHECK(report.ate_percent == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.are_deg_per_m == doctest::Approx(0.0));
}

TEST_CASE("doubling the deviation doubles the error") {
  // Straight-line family: gt steps 1 m, estimates overshoot each step by
  // d and 2d. Segment errors scale linearly in d.
  const Trajectory gt = straight_line(200, 1.0);
  const Trajectory est1 = straight_line(200, 1.0, 0.001);
  const Trajectory est2 = straight_line(200, 1.0, 0.002);
  const double lengths[] = {10.0, 50.0};
  const ErrorReport r1 = evaluate(est1, gt, lengths);
  const ErrorReport r2 = evaluate(est2, gt, lengths);
  REQUIRE(r1.pair_count > 0);
  CHECK(r2.ate_percent ==
        doctest::Approx(2.0 * r1.ate_percent).epsilon(1e-6));
}

TEST_CASE("segment lengths beyond the path are skipped with a notice") {
  const Trajectory gt = straight_line(11, 1.0);  // 10 m of path
  const double lengths[] = {5.0, 100.0};
  const ErrorReport report = evaluate(gt, gt, lengths);
  REQUIRE(report.skipped_lengths.size() == 1);
  CHECK(report.skipped_lengths[0] == 100.0);
  CHECK(report.per_length.size() == 1);
  const std::string text = format_report(report);
  CHECK(text.find("skipped") != std::string::npos);
}

TEST_CASE("mismatched trajectories are rejected") {
  const Trajectory a = straight_line(10, 1.0);
  const Trajectory b = straight_line(11, 1.0);
  const double lengths[] = {5.0};
  CHECK_THROWS_AS(evaluate(a, b, lengths), std::invalid_argument);

  Trajectory c = a;
  c.poses[3].first = 99;
  CHECK_THROWS_AS(evaluate(a, c, lengths), std::invalid_argument);
}

TEST_CASE("pose parsing accepts the identity line and rejects short lines") {
  std::istringstream good("1 0 0 0 0 1 0 0 0 0 1 0\n");
  const Trajectory traj = read_kitti_poses(good);
  REQUIRE(traj.size() == 1);
  CHECK(traj.poses[0].second.is_approx(Pose::Identity(), 0.0));

  std::istringstream bad("1 0 0 0 0 1 0 0 0 0 1\n");
  CHECK_THROWS_WITH_AS(read_kitti_poses(bad),
                       "pose line 1: expected 12 fields, got 11",
                       std::runtime_error);
}
