#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gencorr {

/// Raised for malformed input meshes and topology violations.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected mesh edge with its (one or two) adjacent faces. `f1` is -1 on
/// the boundary.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int f0 = -1;
  int f1 = -1;

  bool is_boundary() const { return f1 < 0; }
};

/// Indexed, edge-manifold triangle mesh. Immutable after construction.
///
/// Vertex areas are the lumped barycentric areas: a third of the area of all
/// incident faces, so that they sum to the total surface area.
class TriMesh {
 public:
  TriMesh() = default;

  /// Builds edge topology and areas. Throws MeshError on out-of-range
  /// indices, repeated vertices within a face, or an edge shared by more than
  /// two faces.
  TriMesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces);

  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_faces() const { return static_cast<int>(faces_.rows()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Eigen::MatrixX3d& vertices() const { return vertices_; }
  const Eigen::MatrixX3i& faces() const { return faces_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Eigen::VectorXd& face_areas() const { return face_areas_; }
  const Eigen::VectorXd& vertex_areas() const { return vertex_areas_; }

  /// Sorted one-ring neighbours of every vertex.
  const std::vector<std::vector<int>>& neighbors() const { return neighbors_; }

  double total_area() const { return face_areas_.sum(); }
  bool is_closed() const;

  /// Same connectivity, new positions.
  TriMesh with_vertices(Eigen::MatrixX3d vertices) const;

  /// 64-bit FNV-1a hash over positions and faces; used as a cache key.
  std::uint64_t content_hash() const;

 private:
  Eigen::MatrixX3d vertices_;
  Eigen::MatrixX3i faces_;
  std::vector<Edge> edges_;
  Eigen::VectorXd face_areas_;
  Eigen::VectorXd vertex_areas_;
  std::vector<std::vector<int>> neighbors_;
};

/// Per-face areas for arbitrary positions over a fixed connectivity.
Eigen::VectorXd face_areas(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces);

/// Unit face normals; zero rows for zero-area faces.
Eigen::MatrixX3d face_normals(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces);

/// Uniformly rescales the mesh to unit surface area and moves its
/// area-weighted centroid to the origin. Throws MeshError when the area is 0.
TriMesh normalize_area(const TriMesh& mesh);

}  // namespace gencorr
