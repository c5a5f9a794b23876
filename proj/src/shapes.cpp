#include "gencorr/shapes.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace gencorr::shapes {
namespace {

struct RawMesh {
  std::vector<Eigen::Vector3d> verts;
  std::vector<Eigen::Vector3i> faces;
};

RawMesh unit_icosphere(int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.verts = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0}, {0, -1, phi}, {0, 1, phi},
             {0, -1, -phi}, {0, 1, -phi}, {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : m.verts) v.normalize();
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(m.verts.size());
      m.verts.push_back((m.verts[a] + m.verts[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const int ab = mid(f[0], f[1]);
      const int bc = mid(f[1], f[2]);
      const int ca = mid(f[2], f[0]);
      next.emplace_back(f[0], ab, ca);
      next.emplace_back(f[1], bc, ab);
      next.emplace_back(f[2], ca, bc);
      next.emplace_back(ab, bc, ca);
    }
    m.faces = std::move(next);
  }
  return m;
}

TriMesh to_mesh(const RawMesh& m) {
  Eigen::MatrixX3d v(static_cast<Eigen::Index>(m.verts.size()), 3);
  for (std::size_t i = 0; i < m.verts.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = m.verts[i].transpose();
  Eigen::MatrixX3i f(static_cast<Eigen::Index>(m.faces.size()), 3);
  for (std::size_t i = 0; i < m.faces.size(); ++i) f.row(static_cast<Eigen::Index>(i)) = m.faces[i].transpose();
  return TriMesh(std::move(v), std::move(f));
}

}  // namespace

TriMesh icosphere(int subdivisions, double radius) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.verts) v *= radius;
  return to_mesh(m);
}

TriMesh ellipsoid(int subdivisions, const Eigen::Vector3d& radii) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.verts) v = v.cwiseProduct(radii);
  return to_mesh(m);
}

TriMesh bumpy_sphere(int subdivisions, const std::vector<Bump>& bumps) {
  RawMesh m = unit_icosphere(subdivisions);
  for (auto& v : m.verts) {
    double r = 1.0;
    for (const Bump& b : bumps) {
      r += b.height * std::exp(-(1.0 - v.dot(b.direction.normalized())) / b.width);
    }
    v *= r;
  }
  return to_mesh(m);
}

TriMesh blob(int subdivisions) {
  return bumpy_sphere(subdivisions, {
                                        {{0.0, 0.0, 1.0}, 0.9, 0.06},
                                        {{1.0, 0.2, -0.3}, 0.6, 0.08},
                                        {{-0.7, 0.8, -0.2}, 0.45, 0.10},
                                        {{-0.3, -1.0, 0.1}, 0.30, 0.12},
                                        {{0.2, 0.3, -1.0}, 0.20, 0.15},
                                    });
}

}  // namespace gencorr::shapes
