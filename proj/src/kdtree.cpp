#include "gencorr/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace gencorr {

double squared_distance(const Eigen::RowVector3d& a, const Eigen::RowVector3d& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

int nearest_linear(const Eigen::MatrixX3d& points, const Eigen::RowVector3d& query) {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points.rows(); ++i) {
    const double d2 = squared_distance(points.row(i), query);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

KdTree::KdTree(Eigen::MatrixX3d points) : points_(std::move(points)) {
  std::vector<int> idx(static_cast<std::size_t>(points_.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(idx.size());
  root_ = build(idx, 0, static_cast<int>(idx.size()), 0);
}

int KdTree::build(std::vector<int>& idx, int begin, int end, int depth) {
  if (begin >= end) return -1;
  const int axis = depth % 3;
  const int mid = begin + (end - begin) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end, [&](int a, int b) {
    const double va = points_(a, axis), vb = points_(b, axis);
    return va != vb ? va < vb : a < b;
  });
  const int node = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], axis});
  const int left = build(idx, begin, mid, depth + 1);
  const int right = build(idx, mid + 1, end, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

void KdTree::search(int node, const Eigen::RowVector3d& q, int& best, double& best_d2) const {
  if (node < 0) return;
  const Node& nd = nodes_[node];
  const double d2 = squared_distance(points_.row(nd.point), q);
  if (d2 < best_d2 || (d2 == best_d2 && nd.point < best)) {
    best_d2 = d2;
    best = nd.point;
  }
  const double diff = q[nd.axis] - points_(nd.point, nd.axis);
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  search(near, q, best, best_d2);
  // Non-strict test: the far side may hold an equally distant, lower index.
  if (diff * diff <= best_d2) search(far, q, best, best_d2);
}

int KdTree::nearest(const Eigen::RowVector3d& query) const {
  int best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d2);
  return best;
}

}  // namespace gencorr
