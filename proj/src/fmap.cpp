#include "gencorr/fmap.hpp"

#include <string>

#include <Eigen/Cholesky>

namespace gencorr {
namespace {

void check_sizes(const SpectralBasis& basis_i, const SpectralBasis& basis_j, const BasisSizes& sizes) {
  if (sizes.target < 1 || sizes.source < 1 || sizes.target > basis_i.size() || sizes.source > basis_j.size()) {
    throw FmapError("basis sizes k_t=" + std::to_string(sizes.target) + ", k_s=" + std::to_string(sizes.source) +
                    " exceed available eigenpairs (" + std::to_string(basis_i.size()) + ", " +
                    std::to_string(basis_j.size()) + ")");
  }
}

}  // namespace

Eigen::MatrixXd identity_fmap(const BasisSizes& sizes) {
  return Eigen::MatrixXd::Identity(sizes.target, sizes.source);
}

Eigen::MatrixXd solve_fmap(const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                           std::span<const VertexPair> pairs, const FmapParams& params) {
  if (pairs.empty()) throw FmapError("solve_fmap: empty landmark match");
  const BasisSizes& sizes = params.sizes;
  check_sizes(basis_i, basis_j, sizes);
  const int kt = sizes.target;
  const int ks = sizes.source;
  const auto np = static_cast<Eigen::Index>(pairs.size());

  Eigen::MatrixXd a(np, kt);
  Eigen::MatrixXd y(np, ks);
  for (Eigen::Index p = 0; p < np; ++p) {
    const auto [vi, vj] = pairs[p];
    if (vi < 0 || vi >= basis_i.num_vertices() || vj < 0 || vj >= basis_j.num_vertices()) {
      throw FmapError("solve_fmap: landmark vertex out of range");
    }
    a.row(p) = basis_i.eigenfunctions().row(vi).head(kt);
    y.row(p) = basis_j.eigenfunctions().row(vj).head(ks);
  }

  const Eigen::MatrixXd gram = params.beta * (a.transpose() * a);
  const Eigen::MatrixXd rhs = params.beta * (a.transpose() * y);
  const Eigen::VectorXd lambda_i = basis_i.lambda(kt);
  const Eigen::VectorXd lambda_j = basis_j.lambda(ks);

  Eigen::MatrixXd c(kt, ks);
  for (int b = 0; b < ks; ++b) {
    Eigen::MatrixXd normal = gram;
    normal.diagonal() += params.alpha * (lambda_i.array() - lambda_j[b]).square().matrix();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-12) {
      throw FmapError("solve_fmap: normal system for column " + std::to_string(b) + " is singular");
    }
    c.col(b) = ldlt.solve(rhs.col(b));
  }
  return c;
}

double fmap_objective(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                      std::span<const VertexPair> pairs, double alpha, double beta) {
  const int kt = static_cast<int>(c.rows());
  const int ks = static_cast<int>(c.cols());
  const Eigen::MatrixXd comm =
      basis_i.lambda(kt).asDiagonal() * c - c * basis_j.lambda(ks).asDiagonal();
  double landmark = 0.0;
  for (const auto& [vi, vj] : pairs) {
    landmark += (basis_i.eigenfunctions().row(vi).head(kt) * c - basis_j.eigenfunctions().row(vj).head(ks))
                    .squaredNorm();
  }
  return alpha * comm.squaredNorm() + beta * landmark;
}

Eigen::MatrixX3d mapped_coordinates(const Eigen::MatrixXd& c, const SpectralBasis& basis_i,
                                    const SpectralBasis& basis_j, const Eigen::MatrixX3d& coords_j) {
  const BasisSizes sizes{static_cast<int>(c.rows()), static_cast<int>(c.cols())};
  check_sizes(basis_i, basis_j, sizes);
  if (coords_j.rows() != basis_j.num_vertices()) throw FmapError("mapped_coordinates: coordinate count mismatch");
  const Eigen::MatrixXd coeffs = basis_j.phi_pinv(sizes.source) * coords_j;
  return basis_i.phi(sizes.target) * (c * coeffs);
}

VertexMap fmap_to_vertexmap(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                            const Eigen::MatrixX3d& coords_j, const KdTree& tree_j) {
  const Eigen::MatrixX3d y = mapped_coordinates(c, basis_i, basis_j, coords_j);
  VertexMap map(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index v = 0; v < y.rows(); ++v) map[static_cast<std::size_t>(v)] = tree_j.nearest(y.row(v));
  return map;
}

Eigen::MatrixXd vertexmap_to_fmap(const VertexMap& map, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                                  const BasisSizes& sizes) {
  check_sizes(basis_i, basis_j, sizes);
  if (static_cast<int>(map.size()) != basis_i.num_vertices()) {
    throw FmapError("vertexmap_to_fmap: map length differs from the source vertex count");
  }
  // Pi Phi_{j,s}: row v is the basis row at the image of v.
  Eigen::MatrixXd pulled(basis_i.num_vertices(), sizes.source);
  for (std::size_t v = 0; v < map.size(); ++v) {
    const int target = map[v];
    if (target < 0 || target >= basis_j.num_vertices()) throw FmapError("vertexmap_to_fmap: invalid target vertex");
    pulled.row(static_cast<Eigen::Index>(v)) = basis_j.eigenfunctions().row(target).head(sizes.source);
  }
  return basis_i.phi_pinv(sizes.target) * pulled;
}

RefinedMap refine(const Eigen::MatrixXd& c, const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                  const Eigen::MatrixX3d& coords_j, const KdTree& tree_j) {
  RefinedMap out;
  out.vertex_map = fmap_to_vertexmap(c, basis_i, basis_j, coords_j, tree_j);
  out.fmap = vertexmap_to_fmap(out.vertex_map, basis_i, basis_j,
                               BasisSizes{static_cast<int>(c.rows()), static_cast<int>(c.cols())});
  return out;
}

}  // namespace gencorr
