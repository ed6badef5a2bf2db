#include "lodom/localmap.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>

namespace lodom {

namespace {

// Absolute floor (m^2) below which an eigenvalue counts as zero spread;
// rejects coincident and rank-deficient neighborhoods regardless of the
// ratio test.
constexpr double kEigenFloor = 1e-10;

struct EigenFit {
  Eigen::Vector3d mean;
  Eigen::Vector3d eigenvalues;   // ascending
  Eigen::Matrix3d eigenvectors;  // columns match eigenvalues
};

std::optional<EigenFit> covariance_eigen(
    std::span<const Eigen::Vector3d> points) {
  if (points.size() < 3) return std::nullopt;
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
  if (es.info() != Eigen::Success) return std::nullopt;
  return EigenFit{mean, es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

std::optional<LineLandmark> fit_line(std::span<const Eigen::Vector3d> points,
                                     double eigenvalue_ratio) {
  const auto fit = covariance_eigen(points);
  if (!fit) return std::nullopt;
  const double largest = fit->eigenvalues[2];
  const double second = fit->eigenvalues[1];
  if (largest < kEigenFloor) return std::nullopt;  // coincident points
  if (largest < eigenvalue_ratio * second) return std::nullopt;
  LineLandmark lm;
  lm.center = fit->mean;
  lm.direction = fit->eigenvectors.col(2).normalized();
  return lm;
}

std::optional<PlaneLandmark> fit_plane(std::span<const Eigen::Vector3d> points,
                                       double eigenvalue_ratio) {
  const auto fit = covariance_eigen(points);
  if (!fit) return std::nullopt;
  const double middle = fit->eigenvalues[1];
  const double smallest = fit->eigenvalues[0];
  if (middle < kEigenFloor) return std::nullopt;  // rank < 2
  if (middle < eigenvalue_ratio * smallest) return std::nullopt;
  PlaneLandmark lm;
  lm.center = fit->mean;
  lm.normal = fit->eigenvectors.col(0).normalized();
  return lm;
}

std::vector<Eigen::Vector3d> voxel_downsample(
    std::span<const Eigen::Vector3d> points, double leaf) {
  if (!(leaf > 0.0)) {
    throw std::invalid_argument("voxel_downsample: leaf must be > 0");
  }
  using Key = std::array<std::int64_t, 3>;
  struct Cell {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    std::size_t count = 0;
  };
  std::map<Key, Cell> cells;
  for (const auto& p : points) {
    const Key key{static_cast<std::int64_t>(std::floor(p.x() / leaf)),
                  static_cast<std::int64_t>(std::floor(p.y() / leaf)),
                  static_cast<std::int64_t>(std::floor(p.z() / leaf))};
    auto& cell = cells[key];
    cell.sum += p;
    cell.count += 1;
  }
  std::vector<Eigen::Vector3d> out;
  out.reserve(cells.size());
  for (const auto& [key, cell] : cells) {
    out.push_back(cell.sum / static_cast<double>(cell.count));
  }
  return out;
}

std::vector<Eigen::Vector3d> FeatureMap::knn(Side side,
                                             const Eigen::Vector3d& query,
                                             int k) const {
  std::vector<Eigen::Vector3d> neighbors;
  std::vector<double> sq_dists;
  knn(side, query, k, neighbors, sq_dists);
  return neighbors;
}

void FeatureMap::knn(Side side, const Eigen::Vector3d& query, int k,
                     std::vector<Eigen::Vector3d>& neighbors,
                     std::vector<double>& sq_dists) const {
  neighbors.clear();
  std::vector<int> indices;
  tree(side).knn(query, k, indices, sq_dists);
  neighbors.reserve(indices.size());
  for (int idx : indices) neighbors.push_back(tree(side).points()[idx]);
}

void FeatureMap::insert(const FeatureCloud& features, const Pose& pose) {
  auto add = [&](std::span<const FeaturePoint> pts, KdTree3& tree,
                 double leaf) {
    std::vector<Eigen::Vector3d> merged = tree.points();
    merged.reserve(merged.size() + pts.size());
    for (const auto& fp : pts) merged.push_back(pose * fp.position);
    tree.build(voxel_downsample(merged, leaf));
  };
  add(features.edges, edge_tree_, cfg_.edge_leaf);
  add(features.planars, plane_tree_, cfg_.plane_leaf);
}

bool FeatureMap::maybe_insert(const FeatureCloud& features, const Pose& pose,
                              const Pose& last_keyframe_pose,
                              const KeyframePolicy& policy) {
  const Pose delta = last_keyframe_pose.inverse() * pose;
  const bool trigger = policy.every_frame ||
                       delta.translation.norm() > policy.translation_threshold ||
                       delta.rotation_angle() > policy.rotation_threshold;
  if (!trigger) return false;
  insert(features, pose);
  return true;
}

void FeatureMap::dump(std::ostream& out) const {
  auto write = [&](char tag, const std::vector<Eigen::Vector3d>& pts) {
    char buf[128];
    for (const auto& p : pts) {
      std::snprintf(buf, sizeof(buf), "%c %.12g %.12g %.12g\n", tag, p.x(),
                    p.y(), p.z());
      out << buf;
    }
  };
  write('E', edge_tree_.points());
  write('S', plane_tree_.points());
}

}  // namespace lodom
