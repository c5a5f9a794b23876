#include "gencorr/fitness.hpp"

#include <algorithm>

namespace gencorr {

ShapeData::ShapeData(TriMesh mesh, SpectralBasis basis)
    : mesh_(std::move(mesh)), basis_(std::move(basis)), tree_(mesh_.vertices()), elastic_(mesh_) {
  if (basis_.num_vertices() != mesh_.num_vertices()) {
    throw SpectralError("ShapeData: basis and mesh vertex counts differ");
  }
}

FitnessEvaluator::FitnessEvaluator(const ShapeData& shape_1, const ShapeData& shape_2, FitnessParams params)
    : shape_1_(shape_1), shape_2_(shape_2), params_(std::move(params)) {}

MapPair FitnessEvaluator::compute(std::span<const VertexPair> unordered) const {
  // Canonical pair order keeps the floating-point result independent of how
  // the match was assembled.
  std::vector<VertexPair> match(unordered.begin(), unordered.end());
  std::sort(match.begin(), match.end());
  const SpectralBasis& b1 = shape_1_.basis();
  const SpectralBasis& b2 = shape_2_.basis();
  const Eigen::MatrixX3d& x1 = shape_1_.mesh().vertices();
  const Eigen::MatrixX3d& x2 = shape_2_.mesh().vertices();

  std::vector<VertexPair> reversed = match;
  for (auto& p : reversed) std::swap(p.first, p.second);
  std::sort(reversed.begin(), reversed.end());

  const Eigen::MatrixXd c12_hat = solve_fmap(b1, b2, match, params_.fmap);
  const Eigen::MatrixXd c21_hat = solve_fmap(b2, b1, reversed, params_.fmap);
  RefinedMap r12 = refine(c12_hat, b1, b2, x2, shape_2_.tree());
  RefinedMap r21 = refine(c21_hat, b2, b1, x1, shape_1_.tree());

  MapPair out;
  FitnessReport& rep = out.report;
  const double log_threshold = params_.elastic.log_threshold;
  const Eigen::MatrixX3d on_1 = mapped_coordinates(r12.fmap, b1, b2, x2);
  const Eigen::MatrixX3d on_2 = mapped_coordinates(r21.fmap, b2, b1, x1);
  rep.membrane_12 = shape_1_.elastic().membrane(on_1, log_threshold);
  rep.bending_12 = shape_1_.elastic().bending(on_1);
  rep.membrane_21 = shape_2_.elastic().membrane(on_2, log_threshold);
  rep.bending_21 = shape_2_.elastic().bending(on_2);
  rep.elastic_12 = params_.elastic.membrane_weight * rep.membrane_12 + params_.elastic.bending_weight * rep.bending_12;
  rep.elastic_21 = params_.elastic.membrane_weight * rep.membrane_21 + params_.elastic.bending_weight * rep.bending_21;
  rep.reversibility = reversibility_energy(r12.fmap, r21.fmap, shape_1_.mesh(), shape_2_.mesh(), b1, b2);
  rep.fitness = params_.gamma * (rep.elastic_12 + rep.elastic_21) + (1.0 - params_.gamma) * rep.reversibility;

  out.c12 = std::move(r12.fmap);
  out.c21 = std::move(r21.fmap);
  out.p12 = std::move(r12.vertex_map);
  out.p21 = std::move(r21.vertex_map);
  return out;
}

FitnessReport FitnessEvaluator::evaluate(std::span<const VertexPair> match) const {
  std::vector<VertexPair> key(match.begin(), match.end());
  std::sort(key.begin(), key.end());
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  const FitnessReport report = compute(key).report;
  std::lock_guard lock(mutex_);
  cache_.try_emplace(std::move(key), report);
  return report;
}

VertexMap FitnessEvaluator::guidance_map(std::span<const VertexPair> unordered) const {
  std::vector<VertexPair> match(unordered.begin(), unordered.end());
  std::sort(match.begin(), match.end());
  const Eigen::MatrixXd c12_hat = solve_fmap(shape_1_.basis(), shape_2_.basis(), match, params_.fmap);
  return fmap_to_vertexmap(c12_hat, shape_1_.basis(), shape_2_.basis(), shape_2_.mesh().vertices(),
                           shape_2_.tree());
}

std::size_t FitnessEvaluator::cache_size() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

}  // namespace gencorr
