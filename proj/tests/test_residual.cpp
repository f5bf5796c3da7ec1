// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "ndeq/residual.hpp"
#include "support/fixtures.hpp"

using namespace ndeq;
using namespace ndeq::testing;

namespace {

DiscreteField constant_per_tet(const std::vector<Vec3>& values) {
  DiscreteField F;
  for (const Vec3& v : values) {
    VecPoly p(0);
    p.c.col(0) = v;
    F.H.cells.push_back(p);
    F.jh.cells.push_back(VecPoly(0));
  }
  return F;
}

double sum_terms(const ResidualResult& r) {
  double s = 0.0;
  for (double v : r.volume_term) s += v;
  for (double f : r.face_term) s += f;
  return s;
}

Mesh scaled(const Mesh& m, double c) {
  std::vector<Vec3> x(m.vertices());
  for (auto& p : x) p *= c;
  std::vector<std::array<int, 4>> tets;
  for (std::size_t t = 0; t < m.num_tets(); ++t) tets.push_back(m.tet(static_cast<int>(t)));
  return build_mesh(std::move(x), std::move(tets));
}

}  // namespace

TEST_CASE("exact fields have no residual") {
  // A global linear field is in the degree 2 Nedelec space; its curl is the
  // constant current (-1, -1, -1).
  const Mesh m = unit_cube_mesh(2);
  const DofMap ned = build_dofmap(m, SpaceKind::Nedelec1_tet, 2, false);
  DiscreteField Hh = compute_Hh(m, ned, Eigen::VectorXd::Zero(ned.size()), MaterialField(1.0));
  Hh.H = nedelec_field(m, ned, interpolate_nedelec(m, ned, [](const Vec3& x) { return Vec3(x.y(), x.z(), x.x()); }));
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    const auto g = element_geometry(m, static_cast<int>(t));
    Hh.jh.cells[t] = physical_curl(Hh.H.cells[t], g.Jinv);
  }
  const auto j = CurrentDensity::analytic([](const Vec3&) { return Vec3(-1, -1, -1); }, 0);
  const auto r = compute_residual_estimator(m, MaterialField(1.0), j, Hh, 2);
  CHECK(r.mu_h <= 1e-10);
}

TEST_CASE("lowest order volume term is the current itself") {
  std::mt19937_64 rng(2);
  const Mesh m = unit_cube_mesh(1);
  std::uniform_real_distribution<double> d(-1, 1);
  std::vector<Vec3> values(m.num_tets());
  for (auto& v : values) v = Vec3(d(rng), d(rng), d(rng));
  const auto Hh = constant_per_tet(values);
  const VectorFunction jf = [](const Vec3& x) { return Vec3(x.y() * x.y(), 1.0, x.x() * x.z()); };
  const auto r = compute_residual_estimator(m, MaterialField(1.0), CurrentDensity::analytic(jf, 2), Hh, 1);
  const auto& qr = quadrature(QuadDomain::Tet, 6);
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    const auto g = element_geometry(m, static_cast<int>(t));
    double s = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) s += qr.weights[q] * g.absdet * jf(g.map(qr.points[q])).squaredNorm();
    const double h = m.tet_diameter(static_cast<int>(t));
    CHECK(r.volume_term[t] == doctest::Approx(h * h * s).epsilon(1e-12));
  }
  CHECK(r.mu_h * r.mu_h == doctest::Approx(sum_terms(r)).epsilon(1e-12));
}

TEST_CASE("constant tangential jump across one face") {
  const Mesh m = two_tet_mesh();
  const Vec3 c0(1.0, 2.0, -0.5), c1(0.2, -1.0, 0.7);
  const auto Hh = constant_per_tet({c0, c1});
  const auto zero = CurrentDensity::analytic([](const Vec3&) { return Vec3(Vec3::Zero()); }, 0);
  for (int k = 1; k <= 3; ++k) {
    const auto r = compute_residual_estimator(m, MaterialField(1.0), zero, Hh, k);
    int internal = -1;
    for (std::size_t f = 0; f < m.num_faces(); ++f) {
      if (!m.face(static_cast<int>(f)).is_boundary()) internal = static_cast<int>(f);
      else CHECK(r.face_term[f] == 0.0);
    }
    REQUIRE(internal >= 0);
    const Face& face = m.face(internal);
    const Vec3 g = face.normal.cross(c0 - c1);
    const double expect = m.face_diameter(internal) / k * g.squaredNorm() * face.area;
    CHECK(r.face_term[internal] == doctest::Approx(expect).epsilon(1e-13));
    CHECK(r.mu_T[0] == doctest::Approx(std::sqrt(0.5 * expect)).epsilon(1e-13));
    CHECK(r.mu_T[1] == doctest::Approx(std::sqrt(0.5 * expect)).epsilon(1e-13));
    CHECK(r.mu_h * r.mu_h == doctest::Approx(sum_terms(r)).epsilon(1e-12));
  }
}

TEST_CASE("volume term carries h squared") {
  // Halving the mesh with a frozen constant residual: h^2 gives 1/4, the
  // element volume 1/8.
  const Mesh m = unit_cube_mesh(1);
  const Mesh half = scaled(m, 0.5);
  const auto Hh = constant_per_tet(std::vector<Vec3>(m.num_tets(), Vec3::Zero()));
  const auto j = CurrentDensity::analytic([](const Vec3&) { return Vec3(1.0, -2.0, 3.0); }, 0);
  const auto a = compute_residual_estimator(m, MaterialField(1.0), j, Hh, 2);
  const auto b = compute_residual_estimator(half, MaterialField(1.0), j, Hh, 2);
  for (std::size_t t = 0; t < m.num_tets(); ++t) {
    CHECK(8.0 * b.volume_term[t] / a.volume_term[t] == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("residual estimator on a solved problem") {
  const Mesh m = unit_cube_mesh(2);
  const VectorFunction jf = [](const Vec3& x) {
    const double a = x.x() * (1 - x.x()), b = x.y() * (1 - x.y()), c = x.z() * (1 - x.z());
    return Vec3(2 * c + 2 * b, 2 * a + 2 * c, 2 * a + 2 * b);
  };
  for (int k = 1; k <= 2; ++k) {
    const auto j = CurrentDensity::analytic(jf, 2);
    const auto s = solve_problem(m, MaterialField(1.0), j, k);
    ExecPolicy par;
    par.threads = 3;
    const auto a = compute_residual_estimator(m, MaterialField(1.0), j, s.Hh, k);
    const auto b = compute_residual_estimator(m, MaterialField(1.0), j, s.Hh, k, par);
    CHECK(a.mu_h > 0.0);
    CHECK(a.mu_h == b.mu_h);
    CHECK(a.mu_h * a.mu_h == doctest::Approx(sum_terms(a)).epsilon(1e-12));
  }
}
