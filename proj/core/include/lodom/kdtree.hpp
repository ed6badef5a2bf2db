#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace lodom {

/// Exact 3D k-d tree over a fixed point set. Queries return true nearest
/// neighbors (no approximation); distance ties break toward the lower
/// point index so results are reproducible.
class KdTree3 {
 public:
  KdTree3() = default;
  explicit KdTree3(std::vector<Eigen::Vector3d> points) {
    build(std::move(points));
  }

  void build(std::vector<Eigen::Vector3d> points);
  void clear();

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::vector<Eigen::Vector3d>& points() const { return points_; }

  /// Indices and squared distances of the min(k, size) nearest points,
  /// ascending by distance.
  void knn(const Eigen::Vector3d& query, int k, std::vector<int>& indices,
           std::vector<double>& sq_dists) const;

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;
    int left = -1;
    int right = -1;
    int begin = 0;       // leaf range into order_
    int end = 0;
  };

  int build_node(int begin, int end);
  void search(int node, const Eigen::Vector3d& query, int k,
              std::vector<std::pair<double, int>>& heap) const;

  static constexpr int kLeafSize = 16;

  std::vector<Eigen::Vector3d> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace lodom
