#pragma once

#include <vector>

#include <Eigen/Core>

#include "gencorr/fmap.hpp"
#include "gencorr/mesh.hpp"
#include "gencorr/spectral.hpp"

namespace gencorr {

struct ElasticParams {
  double membrane_weight = 1.0;  // mu
  double bending_weight = 1e-3;  // eta
  double log_threshold = 1e-6;   // below this, log is continued linearly
};

/// log(x) for x >= delta, else its tangent line at delta.
double extended_log(double x, double delta);

/// 1/2 tr G + 1/4 det G - 3/4 log det G - 5/4 for a 2x2 metric distortion G.
double membrane_density(const Eigen::Matrix2d& g, double log_threshold);

/// A reference mesh and new positions over the same connectivity.
struct DeformedConfiguration {
  const TriMesh& reference;
  Eigen::MatrixX3d deformed;

  DeformedConfiguration(const TriMesh& ref, Eigen::MatrixX3d coords);
};

/// Reference-side quantities of the shell energies, computed once per mesh.
class ElasticModel {
 public:
  explicit ElasticModel(const TriMesh& reference);

  /// Pullback metric G_t = E_t^-T (E~_t^T E~_t) E_t^-1 of face t, with E_t the
  /// reference edge vectors in a local orthonormal frame.
  Eigen::Matrix2d distortion(int face, const Eigen::MatrixX3d& deformed) const;

  double membrane(const Eigen::MatrixX3d& deformed, double log_threshold) const;
  double bending(const Eigen::MatrixX3d& deformed) const;
  double energy(const Eigen::MatrixX3d& deformed, const ElasticParams& params) const;

 private:
  const TriMesh* reference_;
  std::vector<Eigen::Matrix2d> inverse_frames_;
  Eigen::VectorXd reference_cosines_;  // per edge; unused on boundary edges
};

double membrane_energy(const DeformedConfiguration& config, double log_threshold = 1e-6);
double bending_energy(const DeformedConfiguration& config);
double elastic_energy(const DeformedConfiguration& config, const ElasticParams& params = {});

/// Elastic energy of M_i deformed to P(C_ij) X_j.
double elastic_energy_of_fmap(const Eigen::MatrixXd& c_ij, const TriMesh& mesh_i, const TriMesh& mesh_j,
                              const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                              const ElasticParams& params = {});

/// ||C_12 Phi_{2,s}^+ P(C_21) X_1 - Phi_{1,t}^+ X_1||^2 + (same with 1 <-> 2).
double reversibility_energy(const Eigen::MatrixXd& c12, const Eigen::MatrixXd& c21, const TriMesh& mesh_1,
                            const TriMesh& mesh_2, const SpectralBasis& basis_1, const SpectralBasis& basis_2);

}  // namespace gencorr
