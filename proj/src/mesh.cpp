#include "gencorr/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <map>
#include <utility>

#include <Eigen/Geometry>

namespace gencorr {

Eigen::VectorXd face_areas(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces) {
  Eigen::VectorXd areas(faces.rows());
  for (Eigen::Index f = 0; f < faces.rows(); ++f) {
    const Eigen::Vector3d a = vertices.row(faces(f, 0));
    const Eigen::Vector3d b = vertices.row(faces(f, 1));
    const Eigen::Vector3d c = vertices.row(faces(f, 2));
    areas[f] = 0.5 * (b - a).cross(c - a).norm();
  }
  return areas;
}

Eigen::MatrixX3d face_normals(const Eigen::MatrixX3d& vertices, const Eigen::MatrixX3i& faces) {
  Eigen::MatrixX3d normals(faces.rows(), 3);
  for (Eigen::Index f = 0; f < faces.rows(); ++f) {
    const Eigen::Vector3d a = vertices.row(faces(f, 0));
    const Eigen::Vector3d b = vertices.row(faces(f, 1));
    const Eigen::Vector3d c = vertices.row(faces(f, 2));
    Eigen::Vector3d n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len > 0.0) {
      n /= len;
    } else {
      n.setZero();
    }
    normals.row(f) = n.transpose();
  }
  return normals;
}

TriMesh::TriMesh(Eigen::MatrixX3d vertices, Eigen::MatrixX3i faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const int n = num_vertices();
  if (n == 0 || faces_.rows() == 0) {
    throw MeshError("mesh has no vertices or no faces");
  }
  if (!vertices_.allFinite()) {
    throw MeshError("mesh has non-finite vertex coordinates");
  }

  std::map<std::pair<int, int>, int> edge_index;
  for (int f = 0; f < num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int v = faces_(f, k);
      if (v < 0 || v >= n) {
        throw MeshError("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                        " out of range [0, " + std::to_string(n) + ")");
      }
    }
    if (faces_(f, 0) == faces_(f, 1) || faces_(f, 1) == faces_(f, 2) || faces_(f, 0) == faces_(f, 2)) {
      throw MeshError("face " + std::to_string(f) + " repeats a vertex");
    }
    for (int k = 0; k < 3; ++k) {
      int a = faces_(f, k);
      int b = faces_(f, (k + 1) % 3);
      if (a > b) std::swap(a, b);
      auto [it, inserted] = edge_index.try_emplace({a, b}, static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back(Edge{a, b, f, -1});
      } else {
        Edge& e = edges_[it->second];
        if (e.f1 >= 0) {
          throw MeshError("non-manifold edge (" + std::to_string(a) + ", " + std::to_string(b) +
                          ") has more than two adjacent faces");
        }
        e.f1 = f;
      }
    }
  }

  face_areas_ = gencorr::face_areas(vertices_, faces_);
  vertex_areas_ = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < num_faces(); ++f) {
    for (int k = 0; k < 3; ++k) vertex_areas_[faces_(f, k)] += face_areas_[f] / 3.0;
  }

  neighbors_.assign(n, {});
  for (const Edge& e : edges_) {
    neighbors_[e.v0].push_back(e.v1);
    neighbors_[e.v1].push_back(e.v0);
  }
  for (auto& ring : neighbors_) std::sort(ring.begin(), ring.end());
}

bool TriMesh::is_closed() const {
  return std::none_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_boundary(); });
}

TriMesh TriMesh::with_vertices(Eigen::MatrixX3d vertices) const {
  if (vertices.rows() != vertices_.rows()) {
    throw MeshError("with_vertices: vertex count mismatch");
  }
  return TriMesh(std::move(vertices), faces_);
}

std::uint64_t TriMesh::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t counts[2] = {vertices_.rows(), faces_.rows()};
  mix(counts, sizeof(counts));
  for (Eigen::Index i = 0; i < vertices_.rows(); ++i) {
    for (int k = 0; k < 3; ++k) {
      const double x = vertices_(i, k);
      mix(&x, sizeof(x));
    }
  }
  for (Eigen::Index f = 0; f < faces_.rows(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const std::int32_t v = faces_(f, k);
      mix(&v, sizeof(v));
    }
  }
  return h;
}

TriMesh normalize_area(const TriMesh& mesh) {
  const double area = mesh.total_area();
  if (!(area > 0.0)) {
    throw MeshError("cannot normalize a mesh with zero total area");
  }
  const Eigen::VectorXd& va = mesh.vertex_areas();
  const Eigen::RowVector3d centroid = (va.transpose() * mesh.vertices()) / va.sum();
  Eigen::MatrixX3d v = (mesh.vertices().rowwise() - centroid) / std::sqrt(area);
  return mesh.with_vertices(std::move(v));
}

}  // namespace gencorr
