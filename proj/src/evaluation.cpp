#include "gencorr/evaluation.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "gencorr/geodesic.hpp"

namespace gencorr {

std::vector<double> correspondence_errors(const VertexMap& map, const std::vector<VertexPair>& ground_truth,
                                          const std::optional<std::vector<VertexPair>>& symmetric_gt,
                                          const TriMesh& mesh_b) {
  const int n_a = static_cast<int>(map.size());
  const int n_b = mesh_b.num_vertices();
  if (symmetric_gt && symmetric_gt->size() != ground_truth.size()) {
    throw EvaluationError("symmetric ground truth has " + std::to_string(symmetric_gt->size()) + " pairs, expected " +
                          std::to_string(ground_truth.size()));
  }
  auto check = [&](const VertexPair& p) {
    if (p.first < 0 || p.first >= n_a || p.second < 0 || p.second >= n_b) {
      throw EvaluationError("ground truth pair (" + std::to_string(p.first) + ", " + std::to_string(p.second) +
                            ") references an invalid vertex");
    }
  };
  for (const auto& p : ground_truth) check(p);
  if (symmetric_gt) {
    for (std::size_t i = 0; i < ground_truth.size(); ++i) {
      check((*symmetric_gt)[i]);
      if ((*symmetric_gt)[i].first != ground_truth[i].first) {
        throw EvaluationError("symmetric ground truth sources differ from the ground truth at pair " +
                              std::to_string(i));
      }
    }
  }
  for (int v : map) {
    if (v < 0 || v >= n_b) throw EvaluationError("vertex map references an invalid target vertex");
  }

  // One Dijkstra per distinct computed image.
  const GeodesicGraph graph(mesh_b);
  std::map<int, Eigen::VectorXd> fields;
  auto distance = [&](int from, int to) {
    auto it = fields.find(from);
    if (it == fields.end()) it = fields.emplace(from, graph.from(from).distances).first;
    return it->second[to];
  };

  std::vector<double> errors;
  errors.reserve(ground_truth.size());
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    const int image = map[ground_truth[i].first];
    double e = distance(image, ground_truth[i].second);
    if (symmetric_gt) e = std::min(e, distance(image, (*symmetric_gt)[i].second));
    errors.push_back(e);
  }
  return errors;
}

ErrorCurve error_curve(const std::vector<double>& errors, int samples, double max_threshold) {
  if (samples < 2) throw EvaluationError("error curve needs at least two samples");
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  ErrorCurve curve;
  for (int i = 0; i < samples; ++i) {
    const double t = max_threshold * i / (samples - 1);
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    curve.thresholds.push_back(t);
    curve.fractions.push_back(sorted.empty() ? 1.0 : static_cast<double>(below) / static_cast<double>(sorted.size()));
  }
  return curve;
}

double landmark_diameter(const Eigen::MatrixXd& landmark_geodesics) {
  if (landmark_geodesics.rows() < 2) return 1.0;
  const double d = landmark_geodesics.maxCoeff();
  return d > 0.0 ? d : 1.0;
}

double chromosome_distance(const Chromosome& a, const Chromosome& b, const Eigen::MatrixXd& target_geodesics,
                           double diameter) {
  if (a.genes.size() != b.genes.size()) throw EvaluationError("chromosomes have different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.genes.size(); ++i) {
    const int x = a.genes[i];
    const int y = b.genes[i];
    if (x == y) continue;
    if (x == kEmptyGene || y == kEmptyGene) {
      sum += 1.0;
    } else {
      sum += target_geodesics(x, y) / diameter;
    }
  }
  return sum;
}

Eigen::MatrixXd chromosome_distance_matrix(const std::vector<Chromosome>& chromosomes,
                                           const Eigen::MatrixXd& target_geodesics) {
  const double diameter = landmark_diameter(target_geodesics);
  const auto n = static_cast<Eigen::Index>(chromosomes.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = chromosome_distance(chromosomes[i], chromosomes[j], target_geodesics, diameter);
    }
  }
  return d;
}

double mean_pairwise_distance(const Eigen::MatrixXd& distances) {
  const Eigen::Index n = distances.rows();
  if (n < 2) return 0.0;
  return distances.sum() / static_cast<double>(n * (n - 1));
}

double identity_fraction(const Chromosome& c) {
  int matched = 0;
  int identical = 0;
  for (std::size_t i = 0; i < c.genes.size(); ++i) {
    if (c.genes[i] == kEmptyGene) continue;
    ++matched;
    if (c.genes[i] == static_cast<int>(i)) ++identical;
  }
  return matched ? static_cast<double>(identical) / matched : 0.0;
}

}  // namespace gencorr
