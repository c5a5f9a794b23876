#pragma once

#include <filesystem>
#include <iosfwd>

#include <Eigen/Core>

#include "gencorr/mesh.hpp"

namespace gencorr {

/// Reads an ASCII OBJ, OFF or PLY triangle mesh, dispatching on the file
/// extension. The mesh is not rescaled.
TriMesh load_mesh(const std::filesystem::path& path);

TriMesh read_obj(std::istream& in);
TriMesh read_off(std::istream& in);
TriMesh read_ply(std::istream& in);

/// ASCII PLY with per-vertex 8-bit RGB. `colors` holds values in [0, 1] and
/// must have one row per vertex.
void write_ply(const std::filesystem::path& path, const TriMesh& mesh, const Eigen::MatrixX3d& colors);
void write_ply(std::ostream& out, const TriMesh& mesh, const Eigen::MatrixX3d& colors);

/// Maps a scalar in [0, 1] onto a blue-white-red ramp.
Eigen::RowVector3d diverging_color(double t);

}  // namespace gencorr
