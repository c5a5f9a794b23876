#include "gencorr/elastic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/LU>

namespace gencorr {
namespace {

constexpr double kMinHingeArea = 1e-12;

}  // namespace

double extended_log(double x, double delta) {
  return x >= delta ? std::log(x) : std::log(delta) + (x - delta) / delta;
}

double membrane_density(const Eigen::Matrix2d& g, double log_threshold) {
  const double det = g.determinant();
  return 0.5 * g.trace() + 0.25 * det - 0.75 * extended_log(det, log_threshold) - 1.25;
}

DeformedConfiguration::DeformedConfiguration(const TriMesh& ref, Eigen::MatrixX3d coords)
    : reference(ref), deformed(std::move(coords)) {
  if (deformed.rows() != reference.num_vertices()) {
    throw MeshError("deformed configuration must have one position per reference vertex");
  }
  if (!deformed.allFinite()) throw MeshError("deformed configuration has non-finite coordinates");
}

ElasticModel::ElasticModel(const TriMesh& reference) : reference_(&reference) {
  const auto& x = reference.vertices();
  const auto& faces = reference.faces();
  inverse_frames_.resize(static_cast<std::size_t>(reference.num_faces()));
  for (int f = 0; f < reference.num_faces(); ++f) {
    const Eigen::Vector3d p0 = x.row(faces(f, 0));
    const Eigen::Vector3d e1 = x.row(faces(f, 1)).transpose() - p0;
    const Eigen::Vector3d e2 = x.row(faces(f, 2)).transpose() - p0;
    const Eigen::Vector3d n = e1.cross(e2);
    if (!(n.norm() > 0.0)) throw MeshError("elastic energy: degenerate reference face " + std::to_string(f));
    const Eigen::Vector3d u = e1.normalized();
    const Eigen::Vector3d v = n.cross(u).normalized();
    Eigen::Matrix2d frame;
    frame << e1.dot(u), e2.dot(u), 0.0, e2.dot(v);
    inverse_frames_[static_cast<std::size_t>(f)] = frame.inverse();
  }

  const Eigen::MatrixX3d normals = face_normals(x, faces);
  reference_cosines_ = Eigen::VectorXd::Zero(reference.num_edges());
  for (int e = 0; e < reference.num_edges(); ++e) {
    const Edge& edge = reference.edges()[e];
    if (!edge.is_boundary()) reference_cosines_[e] = normals.row(edge.f0).dot(normals.row(edge.f1));
  }
}

Eigen::Matrix2d ElasticModel::distortion(int face, const Eigen::MatrixX3d& deformed) const {
  const auto& faces = reference_->faces();
  const Eigen::RowVector3d p0 = deformed.row(faces(face, 0));
  const Eigen::RowVector3d e1 = deformed.row(faces(face, 1)) - p0;
  const Eigen::RowVector3d e2 = deformed.row(faces(face, 2)) - p0;
  Eigen::Matrix2d gram;
  gram << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Eigen::Matrix2d& inv = inverse_frames_[static_cast<std::size_t>(face)];
  return inv.transpose() * gram * inv;
}

double ElasticModel::membrane(const Eigen::MatrixX3d& deformed, double log_threshold) const {
  const Eigen::VectorXd& area = reference_->face_areas();
  double total = 0.0;
  for (int f = 0; f < reference_->num_faces(); ++f) {
    total += area[f] * membrane_density(distortion(f, deformed), log_threshold);
  }
  return total;
}

double ElasticModel::bending(const Eigen::MatrixX3d& deformed) const {
  const auto& faces = reference_->faces();
  const Eigen::MatrixX3d normals = face_normals(deformed, faces);
  const Eigen::VectorXd areas = face_areas(deformed, faces);
  double total = 0.0;
  for (int e = 0; e < reference_->num_edges(); ++e) {
    const Edge& edge = reference_->edges()[e];
    if (edge.is_boundary()) continue;
    const auto n0 = normals.row(edge.f0);
    const auto n1 = normals.row(edge.f1);
    // A collapsed face has no normal, hence no dihedral angle.
    if (n0.squaredNorm() == 0.0 || n1.squaredNorm() == 0.0) continue;
    const double cos_deformed = n0.dot(n1);
    const double hinge_area = std::max((areas[edge.f0] + areas[edge.f1]) / 3.0, kMinHingeArea);
    const double length_sq = (deformed.row(edge.v0) - deformed.row(edge.v1)).squaredNorm();
    const double diff = cos_deformed - reference_cosines_[e];
    total += diff * diff * length_sq / hinge_area;
  }
  return total;
}

double ElasticModel::energy(const Eigen::MatrixX3d& deformed, const ElasticParams& params) const {
  return params.membrane_weight * membrane(deformed, params.log_threshold) +
         params.bending_weight * bending(deformed);
}

double membrane_energy(const DeformedConfiguration& config, double log_threshold) {
  return ElasticModel(config.reference).membrane(config.deformed, log_threshold);
}

double bending_energy(const DeformedConfiguration& config) {
  return ElasticModel(config.reference).bending(config.deformed);
}

double elastic_energy(const DeformedConfiguration& config, const ElasticParams& params) {
  return ElasticModel(config.reference).energy(config.deformed, params);
}

double elastic_energy_of_fmap(const Eigen::MatrixXd& c_ij, const TriMesh& mesh_i, const TriMesh& mesh_j,
                              const SpectralBasis& basis_i, const SpectralBasis& basis_j,
                              const ElasticParams& params) {
  const DeformedConfiguration config(mesh_i, mapped_coordinates(c_ij, basis_i, basis_j, mesh_j.vertices()));
  return elastic_energy(config, params);
}

double reversibility_energy(const Eigen::MatrixXd& c12, const Eigen::MatrixXd& c21, const TriMesh& mesh_1,
                            const TriMesh& mesh_2, const SpectralBasis& basis_1, const SpectralBasis& basis_2) {
  if (c12.rows() != c21.rows() || c12.cols() != c21.cols()) {
    throw FmapError("reversibility_energy: C_12 and C_21 must have the same shape");
  }
  const int kt = static_cast<int>(c12.rows());
  const int ks = static_cast<int>(c12.cols());
  const Eigen::MatrixX3d& x1 = mesh_1.vertices();
  const Eigen::MatrixX3d& x2 = mesh_2.vertices();
  // P(C_21) X_1 lives on M_2, P(C_12) X_2 on M_1.
  const Eigen::MatrixX3d on_2 = mapped_coordinates(c21, basis_2, basis_1, x1);
  const Eigen::MatrixX3d on_1 = mapped_coordinates(c12, basis_1, basis_2, x2);
  const Eigen::MatrixXd r1 = c12 * (basis_2.phi_pinv(ks) * on_2) - basis_1.phi_pinv(kt) * x1;
  const Eigen::MatrixXd r2 = c21 * (basis_1.phi_pinv(ks) * on_1) - basis_2.phi_pinv(kt) * x2;
  return r1.squaredNorm() + r2.squaredNorm();
}

}  // namespace gencorr
