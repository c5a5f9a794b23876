#include "gencorr/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace gencorr {

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Max:
      return "max";
    case Category::Min:
      return "min";
    case Category::Center:
      return "center";
  }
  return "?";
}

Category category_from_string(std::string_view s) {
  if (s == "max") return Category::Max;
  if (s == "min") return Category::Min;
  if (s == "center") return Category::Center;
  throw LandmarkError("unknown landmark category '" + std::string(s) + "'");
}

bool LandmarkSet::adjacent(int a, int b) const {
  const auto& ring = adjacency[a];
  return std::binary_search(ring.begin(), ring.end(), b);
}

int LandmarkSet::nearest_landmark(int vertex) const {
  Eigen::Index best = 0;
  fields.col(vertex).minCoeff(&best);
  return static_cast<int>(best);
}

Eigen::VectorXd agd(const TriMesh& mesh, const GeodesicGraph& graph) {
  const int n = mesh.num_vertices();
  Eigen::VectorXd out(n);
  for (int v = 0; v < n; ++v) {
    out[v] = mesh.vertex_areas().dot(graph.from(v).distances);
  }
  return out;
}

Eigen::VectorXd agd(const TriMesh& mesh) { return agd(mesh, GeodesicGraph(mesh)); }

std::vector<int> local_extrema(const TriMesh& mesh, const Eigen::VectorXd& f, ExtremumKind kind) {
  std::vector<int> out;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& ring = mesh.neighbors()[v];
    if (ring.empty()) continue;
    const bool extremal = std::all_of(ring.begin(), ring.end(), [&](int u) {
      return kind == ExtremumKind::Max ? f[v] > f[u] : f[v] < f[u];
    });
    if (extremal) out.push_back(v);
  }
  return out;
}

Eigen::VectorXd centers_function(const SpectralBasis& basis, int n_terms) {
  if (basis.size() < n_terms + 1) {
    throw LandmarkError("centers_function: need " + std::to_string(n_terms + 1) + " eigenpairs, basis has " +
                        std::to_string(basis.size()));
  }
  Eigen::VectorXd f = Eigen::VectorXd::Zero(basis.num_vertices());
  for (int k = 1; k <= n_terms; ++k) {
    const double lambda = basis.eigenvalues()[k];
    if (!(lambda > 0.0)) {
      throw LandmarkError("centers_function: non-positive eigenvalue at index " + std::to_string(k));
    }
    const auto phi = basis.eigenfunctions().col(k);
    const double sup = phi.cwiseAbs().maxCoeff();
    f += phi.cwiseAbs() / (std::sqrt(lambda) * sup);
  }
  return f;
}

std::vector<int> filter_by_separation(const std::vector<LandmarkCandidate>& candidates,
                                      const std::function<double(int, int)>& distance, double& separation,
                                      int max_kept, double growth) {
  while (true) {
    std::vector<int> kept;
    for (int i = 0; i < static_cast<int>(candidates.size()); ++i) {
      const bool far = std::all_of(kept.begin(), kept.end(), [&](int j) { return distance(i, j) >= separation; });
      if (far) kept.push_back(i);
    }
    if (static_cast<int>(kept.size()) <= max_kept) return kept;
    separation *= growth;
  }
}

std::vector<std::vector<int>> landmark_adjacency(const TriMesh& mesh, const GeodesicGraph& graph,
                                                 const std::vector<Landmark>& landmarks,
                                                 const Eigen::MatrixXd& geodesics, double radius) {
  const int m = static_cast<int>(landmarks.size());
  std::vector<std::vector<char>> adj(m, std::vector<char>(m, 0));
  for (int a = 0; a < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      if (geodesics(a, b) < radius) adj[a][b] = adj[b][a] = 1;
    }
  }

  std::vector<int> sources(m);
  for (int i = 0; i < m; ++i) sources[i] = landmarks[i].vertex;
  Eigen::VectorXd dist;
  std::vector<int> label;
  graph.nearest_source(sources, dist, label);
  for (const Edge& e : mesh.edges()) {
    const int a = label[e.v0];
    const int b = label[e.v1];
    if (a >= 0 && b >= 0 && a != b) adj[a][b] = adj[b][a] = 1;
  }

  std::vector<std::vector<int>> out(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (adj[a][b]) out[a].push_back(b);
    }
  }
  return out;
}

LandmarkSet make_landmark_set(const TriMesh& mesh, const GeodesicGraph& graph, std::vector<Landmark> landmarks,
                              double adjacency_radius) {
  LandmarkSet set;
  const int m = static_cast<int>(landmarks.size());
  set.fields.resize(m, mesh.num_vertices());
  for (int i = 0; i < m; ++i) set.fields.row(i) = graph.from(landmarks[i].vertex).distances.transpose();
  set.geodesics.resize(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) set.geodesics(i, j) = set.fields(i, landmarks[j].vertex);
  }
  // Dijkstra sums can differ in the last bit between directions.
  set.geodesics = (0.5 * (set.geodesics + set.geodesics.transpose())).eval();
  set.adjacency = landmark_adjacency(mesh, graph, landmarks, set.geodesics, adjacency_radius);
  set.landmarks = std::move(landmarks);
  return set;
}

LandmarkSet detect_landmarks(const TriMesh& mesh, const SpectralBasis& basis, const LandmarkParams& params) {
  const GeodesicGraph graph(mesh);
  const Eigen::VectorXd avg = agd(mesh, graph);
  const double mean = avg.mean();
  const Eigen::VectorXd centers = centers_function(basis, params.centers_eigenfunctions);

  auto ranked = [&](std::vector<int> verts, auto&& key) {
    std::stable_sort(verts.begin(), verts.end(), [&](int a, int b) {
      const double ka = key(a), kb = key(b);
      return ka != kb ? ka < kb : a < b;
    });
    return verts;
  };
  const auto salience = [&](int v) { return -std::abs(avg[v] - mean); };
  const std::vector<int> maxima = ranked(local_extrema(mesh, avg, ExtremumKind::Max), salience);
  const std::vector<int> minima = ranked(local_extrema(mesh, avg, ExtremumKind::Min), salience);
  const std::vector<int> center_pts =
      ranked(local_extrema(mesh, centers, ExtremumKind::Min), [&](int v) { return centers[v]; });

  std::vector<LandmarkCandidate> candidates;
  std::vector<char> taken(mesh.num_vertices(), 0);
  auto push = [&](const std::vector<int>& verts, Category c) {
    for (int v : verts) {
      if (taken[v]) continue;
      taken[v] = 1;
      candidates.push_back({v, c});
    }
  };
  push(maxima, Category::Max);
  push(minima, Category::Min);
  push(center_pts, Category::Center);

  std::vector<Eigen::VectorXd> cand_fields;
  cand_fields.reserve(candidates.size());
  for (const auto& c : candidates) cand_fields.push_back(graph.from(c.vertex).distances);
  const auto distance = [&](int i, int j) {
    return std::min(cand_fields[i][candidates[j].vertex], cand_fields[j][candidates[i].vertex]);
  };

  double separation = params.min_separation;
  const std::vector<int> kept =
      filter_by_separation(candidates, distance, separation, params.max_landmarks, params.separation_growth);
  if (kept.size() < 3) {
    throw LandmarkError("insufficient features: only " + std::to_string(kept.size()) + " landmarks detected");
  }

  std::vector<Landmark> landmarks;
  landmarks.reserve(kept.size());
  for (int idx : kept) {
    landmarks.push_back({candidates[idx].vertex, candidates[idx].category, static_cast<int>(landmarks.size())});
  }
  LandmarkSet set = make_landmark_set(mesh, graph, std::move(landmarks), params.adjacency_radius);
  set.min_separation = separation;
  return set;
}

std::vector<std::vector<int>> landmark_origins(const LandmarkSet& source, const LandmarkSet& target) {
  std::vector<std::vector<int>> out(source.size());
  for (int i = 0; i < source.size(); ++i) {
    for (int j = 0; j < target.size(); ++j) {
      if (target.landmarks[j].category == source.landmarks[i].category) out[i].push_back(j);
    }
  }
  return out;
}

}  // namespace gencorr
