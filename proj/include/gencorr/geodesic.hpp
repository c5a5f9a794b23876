#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "gencorr/mesh.hpp"

namespace gencorr {

struct GeodesicField {
  int source = -1;
  Eigen::VectorXd distances;
};

/// Weighted vertex graph approximating surface distances.
///
/// Holds every mesh edge plus, for each interior edge, a shortcut between the
/// two opposite vertices of its faces whose length is the straight segment in
/// the unfolded quad. The shortcut is only added when that segment crosses the
/// shared edge, so it never undercuts a path that stays on the surface.
class GeodesicGraph {
 public:
  struct Arc {
    int to;
    double length;
  };

  explicit GeodesicGraph(const TriMesh& mesh);

  int num_vertices() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs(int v) const { return arcs_[v]; }

  /// Single-source Dijkstra. Throws MeshError when some vertex is unreachable.
  GeodesicField from(int source) const;

  /// Multi-source Dijkstra: distance to the nearest source and the index (into
  /// `sources`) of that source. Ties go to the lower source index.
  void nearest_source(std::span<const int> sources, Eigen::VectorXd& distance, std::vector<int>& label) const;

 private:
  std::vector<std::vector<Arc>> arcs_;
};

GeodesicField geodesic_from(const TriMesh& mesh, int source);

}  // namespace gencorr
