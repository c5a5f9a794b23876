#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "gencorr/elastic.hpp"
#include "gencorr/fmap.hpp"
#include "gencorr/spectral.hpp"

using namespace gencorr;

namespace {

double closed_form_scale(double s) { return s * s + std::pow(s, 4) / 4.0 - 3.0 * std::log(s) - 1.25; }

}  // namespace

TEST_CASE("extended log is continuous and linear below the threshold") {
  const double delta = 1e-6;
  CHECK(extended_log(2.0, delta) == doctest::Approx(std::log(2.0)));
  CHECK(extended_log(delta, delta) == doctest::Approx(std::log(delta)));
  CHECK(extended_log(0.0, delta) == doctest::Approx(std::log(delta) - 1.0));
  CHECK(extended_log(-delta, delta) == doctest::Approx(std::log(delta) - 2.0));
  CHECK(std::isfinite(extended_log(-5.0, delta)));
}

TEST_CASE("membrane density closed forms") {
  CHECK(membrane_density(Eigen::Matrix2d::Identity(), 1e-6) == doctest::Approx(0.0));
  for (double s : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    CHECK(std::abs(membrane_density(s * s * Eigen::Matrix2d::Identity(), 1e-6) - closed_form_scale(s)) < 1e-12);
  }
  CHECK(closed_form_scale(2.0) == doctest::Approx(4.670558).epsilon(1e-6));
  // Anisotropic stretch diag(a^2, b^2).
  const double a = 1.3, b = 0.8;
  const double expected = 0.5 * (a * a + b * b) + 0.25 * a * a * b * b - 0.75 * std::log(a * a * b * b) - 1.25;
  CHECK(membrane_density(Eigen::Vector2d(a * a, b * b).asDiagonal(), 1e-6) == doctest::Approx(expected));
  // Collapsed faces stay finite.
  CHECK(std::isfinite(membrane_density(Eigen::Matrix2d::Zero(), 1e-6)));
}

TEST_CASE("distortion tensor") {
  const TriMesh& m = fixtures::blob();
  const ElasticModel model(m);
  const Eigen::MatrixX3d moved = fixtures::rigid(m.vertices(), fixtures::rotation(0.4, 1.2, -0.7), {3, -1, 2});
  for (int f = 0; f < m.num_faces(); f += 37) {
    CHECK((model.distortion(f, m.vertices()) - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK((model.distortion(f, moved) - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK((model.distortion(f, 2.0 * m.vertices()) - 4.0 * Eigen::Matrix2d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("uniform scaling by 2 matches the closed form per face") {
  const TriMesh& m = fixtures::icosphere();
  const ElasticModel model(m);
  for (int f = 0; f < m.num_faces(); ++f) {
    CHECK(std::abs(membrane_density(model.distortion(f, 2.0 * m.vertices()), 1e-6) - closed_form_scale(2.0)) < 1e-9);
  }
  CHECK(model.membrane(2.0 * m.vertices(), 1e-6) == doctest::Approx(m.total_area() * closed_form_scale(2.0)));
  // Dihedral angles are scale invariant, so only the edge-length factor remains and cos terms cancel.
  CHECK(model.bending(2.0 * m.vertices()) < 1e-20);
}

TEST_CASE("energies vanish at the identity and are rigid invariant") {
  const TriMesh& m = fixtures::blob();
  const ElasticModel model(m);
  CHECK(std::abs(model.membrane(m.vertices(), 1e-6)) < 1e-9);
  CHECK(std::abs(model.bending(m.vertices())) < 1e-9);
  const Eigen::MatrixX3d moved = fixtures::rigid(m.vertices(), fixtures::rotation(-2.1, 0.3, 0.9), {0.5, 7, -3});
  CHECK(std::abs(model.membrane(moved, 1e-6)) < 1e-9);
  CHECK(std::abs(model.bending(moved)) < 1e-9);

  // A non-rigid deformation costs energy, and the cost survives a rigid motion.
  Eigen::MatrixX3d bent = m.vertices();
  bent.col(0) *= 1.3;
  const double mem = model.membrane(bent, 1e-6);
  const double bnd = model.bending(bent);
  CHECK(mem > 1e-3);
  const Eigen::MatrixX3d bent_moved = fixtures::rigid(bent, fixtures::rotation(1.0, 2.0, 3.0), {1, 1, 1});
  CHECK(model.membrane(bent_moved, 1e-6) == doctest::Approx(mem).epsilon(1e-9));
  CHECK(model.bending(bent_moved) == doctest::Approx(bnd).epsilon(1e-9));
}

TEST_CASE("bending of a folded hinge") {
  const TriMesh flat = fixtures::hinge(0.0);
  for (double angle : {0.3, 1.0, M_PI / 2}) {
    const TriMesh folded = fixtures::hinge(angle);
    // Only the shared unit edge is interior; both deformed triangles have area 1/2.
    const double expected = std::pow(std::cos(angle) - 1.0, 2) * 1.0 / (1.0 / 3.0);
    CHECK(bending_energy(DeformedConfiguration(flat, folded.vertices())) == doctest::Approx(expected));
    // The hinge keeps its edge lengths: no membrane energy.
    CHECK(std::abs(membrane_energy(DeformedConfiguration(flat, folded.vertices()))) < 1e-12);
  }
  // Folding back to flat from a folded reference costs the same.
  CHECK(bending_energy(DeformedConfiguration(fixtures::hinge(1.0), flat.vertices())) ==
        doctest::Approx(3.0 * std::pow(std::cos(1.0) - 1.0, 2)));
}

TEST_CASE("collapsed faces do not break the energies") {
  const TriMesh& m = fixtures::icosphere();
  const Eigen::MatrixX3d collapsed = Eigen::MatrixX3d::Zero(m.num_vertices(), 3);
  const ElasticModel model(m);
  CHECK(std::isfinite(model.membrane(collapsed, 1e-6)));
  CHECK(model.bending(collapsed) == 0.0);
  CHECK(model.membrane(collapsed, 1e-6) > model.membrane(0.5 * m.vertices(), 1e-6));
}

TEST_CASE("weights combine the two terms") {
  const TriMesh& m = fixtures::blob();
  Eigen::MatrixX3d bent = m.vertices();
  bent.col(2) *= 0.7;
  const DeformedConfiguration config(m, bent);
  ElasticParams params;
  params.membrane_weight = 2.0;
  params.bending_weight = 0.5;
  CHECK(elastic_energy(config, params) ==
        doctest::Approx(2.0 * membrane_energy(config) + 0.5 * bending_energy(config)));
  CHECK_THROWS_AS(DeformedConfiguration(m, Eigen::MatrixX3d::Zero(3, 3)), MeshError);
}

TEST_CASE("reversibility energy against a direct evaluation") {
  const TriMesh m1 = normalize_area(shapes::blob(2));
  const TriMesh m2 = normalize_area(shapes::icosphere(2));
  const SpectralBasis b1 = eigenbasis(m1, 20);
  const SpectralBasis b2 = eigenbasis(m2, 20);
  const Eigen::MatrixXd c12 = Eigen::MatrixXd::Random(20, 10);
  const Eigen::MatrixXd c21 = Eigen::MatrixXd::Random(20, 10);

  auto pinv = [](const SpectralBasis& b, int k) {
    return Eigen::MatrixXd(b.eigenfunctions().leftCols(k).transpose() * b.mass().asDiagonal());
  };
  const Eigen::MatrixXd p21_x1 = b2.eigenfunctions() * c21 * pinv(b1, 10) * m1.vertices();
  const Eigen::MatrixXd p12_x2 = b1.eigenfunctions() * c12 * pinv(b2, 10) * m2.vertices();
  const double expected = (c12 * pinv(b2, 10) * p21_x1 - pinv(b1, 20) * m1.vertices()).squaredNorm() +
                          (c21 * pinv(b1, 10) * p12_x2 - pinv(b2, 20) * m2.vertices()).squaredNorm();
  CHECK(reversibility_energy(c12, c21, m1, m2, b1, b2) == doctest::Approx(expected).epsilon(1e-10));
  CHECK_THROWS_AS(reversibility_energy(c12, Eigen::MatrixXd::Zero(20, 9), m1, m2, b1, b2), FmapError);
}

TEST_CASE("identity functional maps on the sphere are nearly free") {
  const TriMesh m = normalize_area(fixtures::icosphere());
  const SpectralBasis b = eigenbasis(m, 60);
  const Eigen::MatrixXd id = identity_fmap({60, 30});
  CHECK(reversibility_energy(id, id, m, m, b, b) < 1e-6);
  CHECK(elastic_energy_of_fmap(id, m, m, b, b) < 1e-3);
}
