#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gencorr/fmap.hpp"
#include "gencorr/genetic.hpp"
#include "gencorr/mesh.hpp"

namespace gencorr {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cumulative fraction of correspondences whose error is at most each threshold.
struct ErrorCurve {
  std::vector<double> thresholds;
  std::vector<double> fractions;
};

/// Geodesic error on `mesh_b` of every ground-truth pair (source, target):
/// d(map[source], target). With `symmetric_gt`, the smaller of the two errors
/// is used per pair; both lists must have equal length and sources.
std::vector<double> correspondence_errors(const VertexMap& map, const std::vector<VertexPair>& ground_truth,
                                          const std::optional<std::vector<VertexPair>>& symmetric_gt,
                                          const TriMesh& mesh_b);

/// Curve at `samples` evenly spaced thresholds in [0, max_threshold].
ErrorCurve error_curve(const std::vector<double>& errors, int samples = 100, double max_threshold = 0.5);

/// Max pairwise geodesic between landmarks; 1 when there are fewer than two.
double landmark_diameter(const Eigen::MatrixXd& landmark_geodesics);

/// Sum over genes: 0 if equal, 1 if exactly one is empty, else the target
/// landmark geodesic divided by `diameter`.
double chromosome_distance(const Chromosome& a, const Chromosome& b, const Eigen::MatrixXd& target_geodesics,
                           double diameter);

Eigen::MatrixXd chromosome_distance_matrix(const std::vector<Chromosome>& chromosomes,
                                           const Eigen::MatrixXd& target_geodesics);

/// Mean over distinct pairs; 0 for fewer than two chromosomes.
double mean_pairwise_distance(const Eigen::MatrixXd& distances);

/// Fraction of non-empty genes that map landmark i to target landmark i.
double identity_fraction(const Chromosome& c);

}  // namespace gencorr
