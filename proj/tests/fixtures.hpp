#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include <unistd.h>

#include <Eigen/Core>

#include "gencorr/config.hpp"
#include "gencorr/mesh.hpp"
#include "gencorr/pipeline.hpp"
#include "gencorr/shapes.hpp"

namespace fixtures {

using gencorr::TriMesh;

inline const TriMesh& icosphere() {
  static const TriMesh mesh = gencorr::shapes::icosphere(3, 1.0);
  return mesh;
}

inline const TriMesh& blob() {
  static const TriMesh mesh = gencorr::shapes::blob(3);
  return mesh;
}

/// Regular tetrahedron, outward oriented.
inline TriMesh tetrahedron() {
  Eigen::MatrixX3d v(4, 3);
  v << 1, 1, 1, 1, -1, -1, -1, 1, -1, -1, -1, 1;
  Eigen::MatrixX3i f(4, 3);
  f << 0, 1, 2, 0, 3, 1, 0, 2, 3, 1, 3, 2;
  return TriMesh(v, f);
}

/// Open (nx+1) x (ny+1) grid on [0, nx*h] x [0, ny*h], two triangles per cell.
inline TriMesh grid(int nx, int ny, double h = 1.0) {
  Eigen::MatrixX3d v((nx + 1) * (ny + 1), 3);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) v.row(j * (nx + 1) + i) << i * h, j * h, 0.0;
  }
  Eigen::MatrixX3i f(2 * nx * ny, 3);
  int k = 0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = j * (nx + 1) + i, b = a + 1, c = a + nx + 1, d = c + 1;
      f.row(k++) << a, b, d;
      f.row(k++) << a, d, c;
    }
  }
  return TriMesh(v, f);
}

/// Two unit right triangles sharing the edge (0,0,0)-(0,1,0); the second is
/// rotated about that edge by `angle` out of the plane.
inline TriMesh hinge(double angle) {
  Eigen::MatrixX3d v(4, 3);
  v << 0, 0, 0, 0, 1, 0, -1, 0, 0, std::cos(angle), 0, std::sin(angle);
  Eigen::MatrixX3i f(2, 3);
  f << 0, 1, 2, 0, 3, 1;
  return TriMesh(v, f);
}

inline Eigen::Matrix3d rotation(double ax, double ay, double az) {
  const Eigen::Matrix3d rx = (Eigen::Matrix3d() << 1, 0, 0, 0, std::cos(ax), -std::sin(ax), 0, std::sin(ax),
                              std::cos(ax)).finished();
  const Eigen::Matrix3d ry = (Eigen::Matrix3d() << std::cos(ay), 0, std::sin(ay), 0, 1, 0, -std::sin(ay), 0,
                              std::cos(ay)).finished();
  const Eigen::Matrix3d rz = (Eigen::Matrix3d() << std::cos(az), -std::sin(az), 0, std::sin(az), std::cos(az), 0, 0,
                              0, 1).finished();
  return rz * ry * rx;
}

inline Eigen::MatrixX3d rigid(const Eigen::MatrixX3d& v, const Eigen::Matrix3d& r, const Eigen::RowVector3d& t) {
  return (v * r.transpose()).rowwise() + t;
}

/// Prepared blob with default config (area-normalized, landmarks, WKS).
inline const gencorr::PreparedShape& blob_shape() {
  static const std::unique_ptr<gencorr::PreparedShape> shape = gencorr::prepare_shape(blob(), gencorr::RunConfig{});
  return *shape;
}

inline const gencorr::PreparedShape& blob_shape_copy() {
  static const std::unique_ptr<gencorr::PreparedShape> shape = gencorr::prepare_shape(blob(), gencorr::RunConfig{});
  return *shape;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::atomic<int> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("gencorr_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
