#include "gencorr/spectral.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

namespace gencorr {

CotanOperator cotan_operator(const TriMesh& mesh) {
  const int n = mesh.num_vertices();
  const auto& x = mesh.vertices();
  const auto& faces = mesh.faces();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_faces()) * 12);

  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (!(mesh.face_areas()[f] > 0.0)) {
      throw SpectralError("cotan_operator: degenerate face " + std::to_string(f));
    }
    for (int k = 0; k < 3; ++k) {
      const int i = faces(f, (k + 1) % 3);
      const int j = faces(f, (k + 2) % 3);
      const Eigen::Vector3d pk = x.row(faces(f, k));
      const Eigen::Vector3d a = x.row(i).transpose() - pk;
      const Eigen::Vector3d b = x.row(j).transpose() - pk;
      const double w = 0.5 * a.dot(b) / a.cross(b).norm();
      triplets.emplace_back(i, j, -w);
      triplets.emplace_back(j, i, -w);
      triplets.emplace_back(i, i, w);
      triplets.emplace_back(j, j, w);
    }
  }
  CotanOperator op;
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  op.mass = mesh.vertex_areas();
  return op;
}

SpectralBasis::SpectralBasis(Eigen::VectorXd eigenvalues, Eigen::MatrixXd eigenfunctions, Eigen::VectorXd mass,
                             std::uint64_t mesh_hash)
    : eigenvalues_(std::move(eigenvalues)),
      eigenfunctions_(std::move(eigenfunctions)),
      mass_(std::move(mass)),
      mesh_hash_(mesh_hash) {
  if (eigenfunctions_.cols() != eigenvalues_.size() || eigenfunctions_.rows() != mass_.size()) {
    throw SpectralError("SpectralBasis: inconsistent dimensions");
  }
  pseudo_inverse_ = eigenfunctions_.transpose() * mass_.asDiagonal();
}

SpectralBasis eigenbasis(const TriMesh& mesh, int k) {
  const int n = mesh.num_vertices();
  if (k < 1 || k > n) {
    throw SpectralError("eigenbasis: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  const CotanOperator op = cotan_operator(mesh);
  const Eigen::VectorXd inv_sqrt_mass = op.mass.cwiseSqrt().cwiseInverse();

  Eigen::MatrixXd a = inv_sqrt_mass.asDiagonal() * Eigen::MatrixXd(op.stiffness) * inv_sqrt_mass.asDiagonal();
  a = 0.5 * (a + a.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw SpectralError("eigenbasis: symmetric eigen-solver did not converge");
  }

  Eigen::VectorXd values = solver.eigenvalues().head(k);
  Eigen::MatrixXd phi = inv_sqrt_mass.asDiagonal() * solver.eigenvectors().leftCols(k);
  for (int j = 0; j < k; ++j) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
      const double m = std::abs(phi(i, j));
      if (m > best) {
        best = m;
        arg = i;
      }
    }
    if (phi(arg, j) < 0.0) phi.col(j) *= -1.0;
  }
  return SpectralBasis(std::move(values), std::move(phi), op.mass, mesh.content_hash());
}

void save_basis(const std::filesystem::path& path, const SpectralBasis& basis) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SpectralError("cannot write basis cache " + path.string());
  out << basis.num_vertices() << ' ' << basis.size() << '\n';
  auto put = [&out](double v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); };
  for (int j = 0; j < basis.size(); ++j) put(basis.eigenvalues()[j]);
  for (int i = 0; i < basis.num_vertices(); ++i) {
    for (int j = 0; j < basis.size(); ++j) put(basis.eigenfunctions()(i, j));
  }
}

std::optional<SpectralBasis> load_basis(const std::filesystem::path& path, const TriMesh& mesh, int k) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string header;
  if (!std::getline(in, header)) return std::nullopt;
  std::istringstream ss(header);
  int n = 0, kk = 0;
  if (!(ss >> n >> kk) || n != mesh.num_vertices() || kk != k) return std::nullopt;
  Eigen::VectorXd values(k);
  Eigen::MatrixXd phi(n, k);
  auto get = [&in](double& v) { in.read(reinterpret_cast<char*>(&v), sizeof(v)); };
  for (int j = 0; j < k; ++j) get(values[j]);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < k; ++j) get(phi(i, j));
  }
  if (!in) return std::nullopt;
  return SpectralBasis(std::move(values), std::move(phi), mesh.vertex_areas(), mesh.content_hash());
}

SpectralBasis eigenbasis_cached(const TriMesh& mesh, int k, const std::optional<std::filesystem::path>& cache_dir) {
  if (!cache_dir) return eigenbasis(mesh, k);
  std::ostringstream name;
  name << std::hex << mesh.content_hash() << std::dec << '_' << k << ".basis";
  const std::filesystem::path path = *cache_dir / name.str();
  if (auto cached = load_basis(path, mesh, k)) return *std::move(cached);
  SpectralBasis basis = eigenbasis(mesh, k);
  std::error_code ec;
  std::filesystem::create_directories(*cache_dir, ec);
  if (!ec) save_basis(path, basis);
  return basis;
}

Eigen::VectorXd project(const SpectralBasis& basis, const Eigen::VectorXd& f) {
  if (f.size() != basis.num_vertices()) throw SpectralError("project: dimension mismatch");
  return basis.pseudo_inverse() * f;
}

Eigen::VectorXd reconstruct(const SpectralBasis& basis, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != basis.size()) throw SpectralError("reconstruct: dimension mismatch");
  return basis.eigenfunctions() * coeffs;
}

}  // namespace gencorr
