#pragma once

#include <span>

#include <Eigen/Core>

#include "gencorr/spectral.hpp"

namespace gencorr {

struct WksParams {
  int num_energies = 100;
  /// Gaussian width as a multiple of the log-energy step.
  double width_factor = 7.0;
};

/// Wave kernel signatures: n x T, one column per log-energy sample.
///
/// Energies are evenly spaced over [log lambda_2, log lambda_k]; column e holds
/// sum_k phi_k(v)^2 w_k(e) / sum_k w_k(e) with Gaussian weights w_k(e) in log
/// energy. The constant eigenfunction is excluded.
struct WksTable {
  Eigen::VectorXd log_energies;
  Eigen::MatrixXd signatures;
};

WksTable wks(const SpectralBasis& basis, const WksParams& params = {});

/// Per-energy normalized L1 distance, sum_e |a_e - b_e| / (a_e + b_e).
double wks_raw_distance(const WksTable& a, int vertex_a, const WksTable& b, int vertex_b);

/// Raw distance from `vertex_a` to `vertex_b`, divided by the largest raw
/// distance from `vertex_a` to any of `candidates_b`. In [0, 1] whenever
/// `vertex_b` is among the candidates.
double wks_distance(const WksTable& a, int vertex_a, const WksTable& b, int vertex_b,
                    std::span<const int> candidates_b);

/// Row-normalized matrix W(i, j) for all pairs of `vertices_a` x `vertices_b`.
Eigen::MatrixXd wks_distance_matrix(const WksTable& a, std::span<const int> vertices_a, const WksTable& b,
                                    std::span<const int> vertices_b);

}  // namespace gencorr
