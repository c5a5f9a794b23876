#pragma once

#include <vector>

#include <Eigen/Core>

namespace gencorr {

/// Exact nearest-neighbour search in R^3. Equal distances resolve to the lowest
/// point index, so results agree bit-for-bit with `nearest_linear`.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(Eigen::MatrixX3d points);

  int nearest(const Eigen::RowVector3d& query) const;
  int size() const { return static_cast<int>(points_.rows()); }

 private:
  struct Node {
    int point;  // index into points_
    int axis;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<int>& idx, int begin, int end, int depth);
  void search(int node, const Eigen::RowVector3d& q, int& best, double& best_d2) const;

  Eigen::MatrixX3d points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

double squared_distance(const Eigen::RowVector3d& a, const Eigen::RowVector3d& b);

/// Linear-scan reference for KdTree::nearest.
int nearest_linear(const Eigen::MatrixX3d& points, const Eigen::RowVector3d& query);

}  // namespace gencorr
