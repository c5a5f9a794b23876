#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gencorr/kdtree.hpp"
#include "gencorr/spectral.hpp"

namespace gencorr {

class FmapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Landmark correspondence (vertex on M_i, vertex on M_j).
using VertexPair = std::pair<int, int>;

/// Vertex-to-vertex map M_i -> M_j: entry v is the image vertex on M_j.
using VertexMap = std::vector<int>;

/// Basis sizes of a functional map. C_ij is always k_t x k_s and maps
/// coefficients of functions on M_j (k_s) to coefficients on M_i (k_t).
struct BasisSizes {
  int target = 60;  // k_t
  int source = 30;  // k_s
};

struct FmapParams {
  BasisSizes sizes;
  double alpha = 1.0;   // Laplacian commutativity weight
  double beta = 100.0;  // landmark weight
};

/// Minimizes alpha ||Lambda_i C - C Lambda_j||_F^2 + beta sum ||Phi_i[p] C - Phi_j[q]||^2
/// over (p, q) in `pairs`. The commutativity term is diagonal in the entries
/// of C, so each column is an independent k_t-dimensional ridge problem.
Eigen::MatrixXd solve_fmap(const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                           std::span<const VertexPair> pairs, const FmapParams& params);

/// alpha E_comm + beta E_landmark at C; used by tests and diagnostics.
double fmap_objective(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                      std::span<const VertexPair> pairs, double alpha, double beta);

/// Positions Phi_{i,t} C Phi_{j,s}^+ X_j of the vertices of M_i pushed onto M_j.
Eigen::MatrixX3d mapped_coordinates(const Eigen::MatrixXd& c, const SpectralBasis& basis_i,
                                    const SpectralBasis& basis_j, const Eigen::MatrixX3d& coords_j);

/// Nearest vertex of M_j to every mapped position (lowest index on ties).
VertexMap fmap_to_vertexmap(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                            const Eigen::MatrixX3d& coords_j, const KdTree& tree_j);

/// C = Phi_{i,t}^+ Pi Phi_{j,s} for the 0/1 assignment matrix Pi of `map`.
Eigen::MatrixXd vertexmap_to_fmap(const VertexMap& map, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                                  const BasisSizes& sizes);

struct RefinedMap {
  Eigen::MatrixXd fmap;
  VertexMap vertex_map;
};

/// One conversion cycle C -> pointwise -> C.
RefinedMap refine(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                  const Eigen::MatrixX3d& coords_j, const KdTree& tree_j);

/// [I; 0] of size k_t x k_s.
Eigen::MatrixXd identity_fmap(const BasisSizes& sizes);

}  // namespace gencorr
