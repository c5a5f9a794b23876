#pragma once

#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gencorr/geodesic.hpp"
#include "gencorr/mesh.hpp"
#include "gencorr/spectral.hpp"

namespace gencorr {

class LandmarkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Landmark classes in filtering priority order.
enum class Category { Max = 0, Min = 1, Center = 2 };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

struct Landmark {
  int vertex = -1;
  Category category = Category::Max;
  int salience_rank = 0;  // position in the priority order used for filtering
};

struct LandmarkSet {
  std::vector<Landmark> landmarks;
  /// Sorted landmark indices adjacent to each landmark; never contains itself.
  std::vector<std::vector<int>> adjacency;
  /// m x m geodesic distances between landmarks.
  Eigen::MatrixXd geodesics;
  /// m x n: geodesic distance from each landmark to every vertex.
  Eigen::MatrixXd fields;
  double min_separation = 0.0;  // the d_eps that the final filtering round used

  int size() const { return static_cast<int>(landmarks.size()); }
  bool adjacent(int a, int b) const;
  /// Landmark whose vertex is geodesically closest to `vertex` (lowest index on ties).
  int nearest_landmark(int vertex) const;
};

struct LandmarkParams {
  double min_separation = 0.08;  // initial d_eps
  double separation_growth = 1.1;
  int max_landmarks = 35;
  double adjacency_radius = 0.3;  // d_adj
  int centers_eigenfunctions = 30;
};

/// Area-weighted sum of geodesic distances, AGD(v) = sum_u a_u d(v, u).
Eigen::VectorXd agd(const TriMesh& mesh, const GeodesicGraph& graph);
Eigen::VectorXd agd(const TriMesh& mesh);

enum class ExtremumKind { Max, Min };

/// Vertices whose value is strictly above (Max) or below (Min) every one-ring
/// neighbour. Plateaus yield nothing. Ascending vertex order.
std::vector<int> local_extrema(const TriMesh& mesh, const Eigen::VectorXd& f, ExtremumKind kind);

/// f_N(v) = sum_{k=2}^{N+1} |phi_k(v)| / (sqrt(lambda_k) ||phi_k||_inf); the
/// constant eigenfunction is skipped. Needs N+1 eigenpairs.
Eigen::VectorXd centers_function(const SpectralBasis& basis, int n_terms = 30);

struct LandmarkCandidate {
  int vertex;
  Category category;
};

/// Greedy min-distance filter over candidates given in priority order. Keeps a
/// candidate iff it is at least `separation` from every kept one; while more
/// than `max_kept` survive, the separation grows by `growth` and filtering
/// restarts. Returns the kept candidate indices; `separation` is updated to the
/// value of the final round.
std::vector<int> filter_by_separation(const std::vector<LandmarkCandidate>& candidates,
                                      const std::function<double(int, int)>& distance, double& separation,
                                      int max_kept, double growth);

/// AGD maxima, AGD minima and centers, deduplicated and filtered. Fills
/// adjacency, pairwise geodesics and per-landmark distance fields. Throws
/// LandmarkError("insufficient features") when fewer than 3 survive.
LandmarkSet detect_landmarks(const TriMesh& mesh, const SpectralBasis& basis, const LandmarkParams& params = {});

/// Builds a LandmarkSet (geodesics, fields, adjacency) for given landmarks.
LandmarkSet make_landmark_set(const TriMesh& mesh, const GeodesicGraph& graph, std::vector<Landmark> landmarks,
                              double adjacency_radius);

/// l ~ r iff d(l, r) < radius or their geodesic Voronoi cells share a mesh edge.
std::vector<std::vector<int>> landmark_adjacency(const TriMesh& mesh, const GeodesicGraph& graph,
                                                 const std::vector<Landmark>& landmarks,
                                                 const Eigen::MatrixXd& geodesics, double radius);

/// For each landmark of `source`, the same-category landmarks of `target`.
std::vector<std::vector<int>> landmark_origins(const LandmarkSet& source, const LandmarkSet& target);

}  // namespace gencorr
