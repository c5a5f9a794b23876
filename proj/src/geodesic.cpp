#include "gencorr/geodesic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

namespace gencorr {
namespace {

int opposite_vertex(const Eigen::MatrixX3i& faces, int f, int a, int b) {
  for (int k = 0; k < 3; ++k) {
    const int v = faces(f, k);
    if (v != a && v != b) return v;
  }
  return -1;
}

}  // namespace

GeodesicGraph::GeodesicGraph(const TriMesh& mesh) : arcs_(mesh.num_vertices()) {
  const auto& x = mesh.vertices();
  const auto& faces = mesh.faces();
  auto add = [this](int a, int b, double len) {
    arcs_[a].push_back({b, len});
    arcs_[b].push_back({a, len});
  };

  for (const Edge& e : mesh.edges()) {
    const Eigen::Vector3d p = x.row(e.v0);
    const Eigen::Vector3d q = x.row(e.v1);
    add(e.v0, e.v1, (q - p).norm());
    if (e.is_boundary()) continue;

    const int a = opposite_vertex(faces, e.f0, e.v0, e.v1);
    const int d = opposite_vertex(faces, e.f1, e.v0, e.v1);
    if (a == d) continue;
    const Eigen::Vector3d pa = x.row(a);
    const Eigen::Vector3d pd = x.row(d);
    const Eigen::Vector3d axis = q - p;
    const double len = axis.norm();
    if (!(len > 0.0)) continue;
    const Eigen::Vector3d u = axis / len;

    // Unfold both triangles into the plane with the shared edge on the x-axis,
    // `a` above and `d` below.
    const double ax = (pa - p).dot(u);
    const double ay = ((pa - p) - ax * u).norm();
    const double dx = (pd - p).dot(u);
    const double dy = -((pd - p) - dx * u).norm();
    if (!(ay > 0.0) || !(dy < 0.0)) continue;
    const double t = ay / (ay - dy);
    const double cross = ax + t * (dx - ax);
    if (cross <= 0.0 || cross >= len) continue;
    add(a, d, std::hypot(ax - dx, ay - dy));
  }
}

GeodesicField GeodesicGraph::from(int source) const {
  const int n = num_vertices();
  if (source < 0 || source >= n) throw MeshError("geodesic source " + std::to_string(source) + " out of range");
  Eigen::VectorXd distance;
  std::vector<int> label;
  const int sources[1] = {source};
  nearest_source(sources, distance, label);
  for (int v = 0; v < n; ++v) {
    if (!std::isfinite(distance[v])) {
      throw MeshError("mesh is disconnected: vertex " + std::to_string(v) + " unreachable from " +
                      std::to_string(source));
    }
  }
  return GeodesicField{source, std::move(distance)};
}

void GeodesicGraph::nearest_source(std::span<const int> sources, Eigen::VectorXd& distance,
                                   std::vector<int>& label) const {
  const int n = num_vertices();
  distance = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  label.assign(n, -1);

  // (distance, label, vertex): lexicographic order breaks ties toward the
  // lower source label.
  using Entry = std::tuple<double, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const int v = sources[s];
    if (v < 0 || v >= n) throw MeshError("geodesic source " + std::to_string(v) + " out of range");
    if (distance[v] > 0.0 || label[v] < 0) {
      distance[v] = 0.0;
      label[v] = static_cast<int>(s);
      queue.emplace(0.0, static_cast<int>(s), v);
    }
  }
  std::vector<char> done(n, 0);
  while (!queue.empty()) {
    const auto [d, l, v] = queue.top();
    queue.pop();
    if (done[v]) continue;
    done[v] = 1;
    for (const Arc& arc : arcs_[v]) {
      const double nd = d + arc.length;
      if (nd < distance[arc.to] || (nd == distance[arc.to] && l < label[arc.to] && !done[arc.to])) {
        distance[arc.to] = nd;
        label[arc.to] = l;
        queue.emplace(nd, l, arc.to);
      }
    }
  }
}

GeodesicField geodesic_from(const TriMesh& mesh, int source) { return GeodesicGraph(mesh).from(source); }

}  // namespace gencorr
