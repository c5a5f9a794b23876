#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gencorr/mesh.hpp"

namespace gencorr {

class SpectralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CotanOperator {
  Eigen::SparseMatrix<double> stiffness;  // positive semi-definite, zero row sums
  Eigen::VectorXd mass;                   // lumped vertex areas
};

/// Standard cotangent stiffness with lumped (barycentric) mass. Throws
/// SpectralError on a zero-area face.
CotanOperator cotan_operator(const TriMesh& mesh);

/// First k Laplace-Beltrami eigenpairs of a mesh, M-orthonormal, eigenvalues
/// ascending. Sizes smaller than k are obtained by slicing (`phi(ks)`), which
/// keeps source- and target-size bases consistent with each other.
class SpectralBasis {
 public:
  SpectralBasis() = default;
  SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions, Eigen::VectorXd mass,
                std::uint64_t mesh_hash = 0);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  int num_vertices() const { return static_cast<int>(eigenfunctions_.rows()); }
  std::uint64_t mesh_hash() const { return mesh_hash_; }

  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenfunctions() const { return eigenfunctions_; }
  const Eigen::VectorXd& mass() const { return mass_; }
  /// Phi^T diag(mass), the left inverse of Phi.
  const Eigen::MatrixXd& pseudo_inverse() const { return pseudo_inverse_; }

  auto phi(int k) const { return eigenfunctions_.leftCols(k); }
  auto phi_pinv(int k) const { return pseudo_inverse_.topRows(k); }
  auto lambda(int k) const { return eigenvalues_.head(k); }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenfunctions_;
  Eigen::VectorXd mass_;
  Eigen::MatrixXd pseudo_inverse_;
  std::uint64_t mesh_hash_ = 0;
};

/// Smallest k eigenpairs of S phi = lambda M phi via a dense symmetric solve of
/// M^-1/2 S M^-1/2. Each eigenfunction is signed so that its entry of largest
/// magnitude is positive (lowest vertex index on ties).
SpectralBasis eigenbasis(const TriMesh& mesh, int k);

/// Like eigenbasis, but reads/writes `<cache_dir>/<hash>_<k>.basis` when a
/// cache directory is given.
SpectralBasis eigenbasis_cached(const TriMesh& mesh, int k, const std::optional<std::filesystem::path>& cache_dir);

void save_basis(const std::filesystem::path& path, const SpectralBasis& basis);
std::optional<SpectralBasis> load_basis(const std::filesystem::path& path, const TriMesh& mesh, int k);

/// Coefficients Phi^+ f.
Eigen::VectorXd project(const SpectralBasis& basis, const Eigen::VectorXd& f);
/// Per-vertex function Phi c.
Eigen::VectorXd reconstruct(const SpectralBasis& basis, const Eigen::VectorXd& coeffs);

}  // namespace gencorr
