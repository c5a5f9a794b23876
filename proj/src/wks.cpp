#include "gencorr/wks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gencorr {

WksTable wks(const SpectralBasis& basis, const WksParams& params) {
  const int k = basis.size();
  if (k < 3) throw SpectralError("wks: need at least 3 eigenpairs");
  const Eigen::VectorXd& lambda = basis.eigenvalues();
  if (!(lambda[1] > 0.0)) throw SpectralError("wks: second eigenvalue must be positive");

  const int t_count = params.num_energies;
  const double lo = std::log(lambda[1]);
  const double hi = std::log(lambda[k - 1]);
  WksTable table;
  table.log_energies = Eigen::VectorXd::LinSpaced(t_count, lo, hi);
  const double step = t_count > 1 ? (hi - lo) / (t_count - 1) : 1.0;
  const double sigma = params.width_factor * step;

  Eigen::VectorXd log_lambda(k - 1);
  for (int j = 1; j < k; ++j) log_lambda[j - 1] = std::log(std::max(lambda[j], 1e-12));
  const Eigen::MatrixXd phi_sq = basis.eigenfunctions().rightCols(k - 1).array().square();

  table.signatures.resize(basis.num_vertices(), t_count);
  for (int e = 0; e < t_count; ++e) {
    const Eigen::VectorXd w =
        (-(log_lambda.array() - table.log_energies[e]).square() / (2.0 * sigma * sigma)).exp().matrix();
    const double total = w.sum();
    table.signatures.col(e) = phi_sq * w / (total > 0.0 ? total : 1.0);
  }
  return table;
}

double wks_raw_distance(const WksTable& a, int vertex_a, const WksTable& b, int vertex_b) {
  const auto ra = a.signatures.row(vertex_a);
  const auto rb = b.signatures.row(vertex_b);
  double d = 0.0;
  for (Eigen::Index e = 0; e < ra.size(); ++e) {
    const double s = ra[e] + rb[e];
    if (s > 0.0) d += std::abs(ra[e] - rb[e]) / s;
  }
  return d;
}

double wks_distance(const WksTable& a, int vertex_a, const WksTable& b, int vertex_b,
                    std::span<const int> candidates_b) {
  double scale = 0.0;
  for (int c : candidates_b) scale = std::max(scale, wks_raw_distance(a, vertex_a, b, c));
  const double raw = wks_raw_distance(a, vertex_a, b, vertex_b);
  return scale > 0.0 ? raw / scale : 0.0;
}

Eigen::MatrixXd wks_distance_matrix(const WksTable& a, std::span<const int> vertices_a, const WksTable& b,
                                    std::span<const int> vertices_b) {
  const auto rows = static_cast<Eigen::Index>(vertices_a.size());
  const auto cols = static_cast<Eigen::Index>(vertices_b.size());
  Eigen::MatrixXd w(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) w(i, j) = wks_raw_distance(a, vertices_a[i], b, vertices_b[j]);
    const double scale = cols > 0 ? w.row(i).maxCoeff() : 0.0;
    if (scale > 0.0) w.row(i) /= scale;
  }
  return w;
}

}  // namespace gencorr
