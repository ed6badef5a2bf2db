#include "lodom/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace lodom {

void KdTree3::build(std::vector<Eigen::Vector3d> points) {
  points_ = std::move(points);
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.clear();
  nodes_.reserve(points_.empty() ? 0 : 2 * points_.size() / kLeafSize + 2);
  root_ = points_.empty() ? -1 : build_node(0, static_cast<int>(points_.size()));
}

void KdTree3::clear() {
  points_.clear();
  order_.clear();
  nodes_.clear();
  root_ = -1;
}

int KdTree3::build_node(int begin, int end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();

  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  // Split on the axis of largest extent at the median.
  Eigen::Vector3d lo = points_[order_[begin]];
  Eigen::Vector3d hi = lo;
  for (int i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid,
                   order_.begin() + end, [&](int a, int b) {
                     if (points_[a][axis] != points_[b][axis]) {
                       return points_[a][axis] < points_[b][axis];
                     }
                     return a < b;
                   });

  nodes_[id].axis = axis;
  nodes_[id].split = points_[order_[mid]][axis];
  const int left = build_node(begin, mid);
  const int right = build_node(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

namespace {

// Max-heap entry comparison on (squared distance, index).
inline bool heap_less(const std::pair<double, int>& a,
                      const std::pair<double, int>& b) {
  return a < b;
}

}  // namespace

void KdTree3::search(int node_id, const Eigen::Vector3d& query, int k,
                     std::vector<std::pair<double, int>>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const int idx = order_[i];
      const double d2 = (points_[idx] - query).squaredNorm();
      const std::pair<double, int> cand{d2, idx};
      if (static_cast<int>(heap.size()) < k) {
        heap.push_back(cand);
        std::push_heap(heap.begin(), heap.end(), heap_less);
      } else if (cand < heap.front()) {
        std::pop_heap(heap.begin(), heap.end(), heap_less);
        heap.back() = cand;
        std::push_heap(heap.begin(), heap.end(), heap_less);
      }
    }
    return;
  }

  const double delta = query[node.axis] - node.split;
  const int near = delta < 0.0 ? node.left : node.right;
  const int far = delta < 0.0 ? node.right : node.left;

  search(near, query, k, heap);
  if (static_cast<int>(heap.size()) < k || delta * delta <= heap.front().first) {
    search(far, query, k, heap);
  }
}

void KdTree3::knn(const Eigen::Vector3d& query, int k,
                  std::vector<int>& indices,
                  std::vector<double>& sq_dists) const {
  indices.clear();
  sq_dists.clear();
  if (root_ < 0 || k <= 0) return;

  std::vector<std::pair<double, int>> heap;
  heap.reserve(k);
  search(root_, query, k, heap);

  std::sort(heap.begin(), heap.end());
  indices.reserve(heap.size());
  sq_dists.reserve(heap.size());
  for (const auto& [d2, idx] : heap) {
    indices.push_back(idx);
    sq_dists.push_back(d2);
  }
}

}  // namespace lodom
