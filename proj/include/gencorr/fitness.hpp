#pragma once

#include <map>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "gencorr/elastic.hpp"
#include "gencorr/fmap.hpp"
#include "gencorr/kdtree.hpp"
#include "gencorr/mesh.hpp"
#include "gencorr/spectral.hpp"

namespace gencorr {

/// A mesh with everything the fitness needs precomputed. Not movable: the
/// elastic model keeps a reference to the mesh.
class ShapeData {
 public:
  ShapeData(TriMesh mesh, SpectralBasis basis);
  ShapeData(const ShapeData&) = delete;
  ShapeData& operator=(const ShapeData&) = delete;

  const TriMesh& mesh() const { return mesh_; }
  const SpectralBasis& basis() const { return basis_; }
  const KdTree& tree() const { return tree_; }
  const ElasticModel& elastic() const { return elastic_; }

 private:
  TriMesh mesh_;
  SpectralBasis basis_;
  KdTree tree_;
  ElasticModel elastic_;
};

struct FitnessParams {
  FmapParams fmap;
  ElasticParams elastic;
  double gamma = 5e-4;  // elastic vs reversibility balance
};

struct FitnessReport {
  double membrane_12 = 0.0;
  double bending_12 = 0.0;
  double membrane_21 = 0.0;
  double bending_21 = 0.0;
  double elastic_12 = 0.0;
  double elastic_21 = 0.0;
  double reversibility = 0.0;
  double fitness = 0.0;  // gamma (E_12 + E_21) + (1 - gamma) E_rev; lower is fitter
};

struct MapPair {
  Eigen::MatrixXd c12;  // refined, maps functions on M_2 to M_1
  Eigen::MatrixXd c21;
  VertexMap p12;  // M_1 -> M_2
  VertexMap p21;
  FitnessReport report;
};

/// Fitness of a landmark match (pairs of vertices on M_1, M_2). Evaluation is
/// a pure function of the match; results are memoized in a mutex-guarded
/// cache so concurrent callers are safe.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const ShapeData& shape_1, const ShapeData& shape_2, FitnessParams params);

  FitnessReport evaluate(std::span<const VertexPair> match) const;

  /// Full uncached computation: both solves, refinement, energies.
  MapPair compute(std::span<const VertexPair> match) const;

  /// Unrefined pointwise map P_12(C^_12(match)) used by the growth and
  /// guidance mutations.
  VertexMap guidance_map(std::span<const VertexPair> match) const;

  const ShapeData& shape_1() const { return shape_1_; }
  const ShapeData& shape_2() const { return shape_2_; }
  const FitnessParams& params() const { return params_; }
  std::size_t cache_size() const;

 private:
  const ShapeData& shape_1_;
  const ShapeData& shape_2_;
  FitnessParams params_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<VertexPair>, FitnessReport> cache_;
};

}  // namespace gencorr
