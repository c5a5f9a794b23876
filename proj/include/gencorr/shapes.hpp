#pragma once

#include <vector>

#include <Eigen/Core>

#include "gencorr/mesh.hpp"

namespace gencorr::shapes {

/// Loop-style midpoint subdivision of an icosahedron projected onto a sphere.
/// `subdivisions` = 3 gives 642 vertices and 1280 faces.
TriMesh icosphere(int subdivisions, double radius = 1.0);

/// Icosphere with coordinates scaled per axis. The vertex order is unchanged,
/// so vertex i of the result corresponds to vertex i of the icosphere.
TriMesh ellipsoid(int subdivisions, const Eigen::Vector3d& radii);

struct Bump {
  Eigen::Vector3d direction;  // normalized internally
  double height;
  double width;  // angular falloff, in units of (1 - cos angle)
};

/// Sphere with radial Gaussian bumps: r(x) = 1 + sum_k h_k exp(-(1 - x.d_k) / w_k).
TriMesh bumpy_sphere(int subdivisions, const std::vector<Bump>& bumps);

/// Asymmetric five-limbed blob used as the self-matching fixture.
TriMesh blob(int subdivisions = 3);

}  // namespace gencorr::shapes
