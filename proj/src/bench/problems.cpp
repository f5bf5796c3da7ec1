// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/problems.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "ndeq/autodiff.hpp"

namespace ndeq {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Point = std::array<double, 3>;

Point as_point(const Vec3& x) { return {x.x(), x.y(), x.z()}; }

// Samples n points uniformly in a box with a fixed seed.
std::vector<Point> sample_points(const Vec3& lo, const Vec3& hi, int n, unsigned seed,
                                 const std::function<bool(const Point&)>& keep = {}) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (static_cast<int>(pts.size()) < n) {
    Point p;
    for (int a = 0; a < 3; ++a) p[a] = lo[a] + (hi[a] - lo[a]) * u(rng);
    if (!keep || keep(p)) pts.push_back(p);
  }
  return pts;
}

// curl curl of a vector field given by three scalar component callables.
template <typename C0, typename C1, typename C2>
Vec3 curl_curl(const C0& u0, const C1& u1, const C2& u2, const Point& x) {
  // curl curl u = grad div u - laplace u
  auto d2 = [&](int c, int i, int j) {
    if (c == 0) return ad::partial2(u0, x, i, j);
    if (c == 1) return ad::partial2(u1, x, i, j);
    return ad::partial2(u2, x, i, j);
  };
  Vec3 r;
  for (int c = 0; c < 3; ++c) {
    double graddiv = 0.0, lap = 0.0;
    for (int i = 0; i < 3; ++i) {
      graddiv += d2(i, c, i);
      lap += d2(c, i, i);
    }
    r[c] = graddiv - lap;
  }
  return r;
}

struct CubeU0 {
  template <typename T> T operator()(const std::array<T, 3>& x) const {
    return x[1] * (1.0 - x[1]) * x[2] * (1.0 - x[2]);
  }
};
struct CubeU1 {
  template <typename T> T operator()(const std::array<T, 3>& x) const {
    return x[0] * (1.0 - x[0]) * x[2] * (1.0 - x[2]);
  }
};
struct CubeU2 {
  template <typename T> T operator()(const std::array<T, 3>& x) const {
    return x[0] * (1.0 - x[0]) * x[1] * (1.0 - x[1]);
  }
};

// Stream function of the L-brick: smooth cutoff times r^{2/3} cos(2 phi / 3)
// with phi in [0, 2 pi).
struct LBrickPsi {
  template <typename T> T operator()(const std::array<T, 3>& x) const {
    using std::atan2;
    using std::cos;
    using std::pow;
    using ad::atan2;
    using ad::cos;
    using ad::pow;
    const T a = 1.0 - x[0] * x[0];
    const T b = 1.0 - x[1] * x[1];
    const T c = (1.0 - x[2]) * x[2];
    T phi = atan2(x[1], x[0]);
    if (ad::value(phi) < 0.0) phi = phi + 2.0 * kPi;
    const T r23 = pow(x[0] * x[0] + x[1] * x[1], 1.0 / 3.0);
    return a * a * b * b * c * c * r23 * cos(phi * (2.0 / 3.0));
  }
};

Vec3 lbrick_current(const Vec3& xv) {
  const Point x = as_point(xv);
  const LBrickPsi psi;
  // j = (-d_y lap psi, d_x lap psi, 0)
  double dy = 0.0, dx = 0.0;
  for (int i = 0; i < 3; ++i) {
    dy += ad::partial3(psi, x, i, i, 1);
    dx += ad::partial3(psi, x, i, i, 0);
  }
  return Vec3(-dy, dx, 0.0);
}

bool has_vertex_where(const Mesh& m, int t, const std::function<bool(const Vec3&)>& pred) {
  for (int v : m.tet(t)) {
    if (pred(m.vertex(v))) return true;
  }
  return false;
}

}  // namespace

ProblemSpec cube_poly() {
  ProblemSpec p;
  p.name = "cube_poly";
  p.description = "unit cube, mu = 1, polynomial potential vanishing tangentially on the boundary";
  p.make_mesh = [](int n) { return unit_cube_mesh(n); };
  p.mu = MaterialField(1.0);
  p.u_exact = [](const Vec3& x) {
    return Vec3(x.y() * (1 - x.y()) * x.z() * (1 - x.z()), x.x() * (1 - x.x()) * x.z() * (1 - x.z()),
                x.x() * (1 - x.x()) * x.y() * (1 - x.y()));
  };
  p.H_exact = [](const Vec3& x) {
    return Vec3(x.x() * (1 - x.x()) * (2 * x.z() - 2 * x.y()), x.y() * (1 - x.y()) * (2 * x.x() - 2 * x.z()),
                x.z() * (1 - x.z()) * (2 * x.y() - 2 * x.x()));
  };
  p.j = [](const Vec3& x) {
    const double a = x.x() * (1 - x.x()), b = x.y() * (1 - x.y()), c = x.z() * (1 - x.z());
    return Vec3(2 * c + 2 * b, 2 * a + 2 * c, 2 * a + 2 * b);
  };
  p.j_degree = 2;
  p.trusted_exact = true;
  p.touches_feature = [](const Mesh&, int) { return false; };
  const VectorFunction j = p.j;
  p.consistency_defect = [j] {
    double worst = 0.0;
    for (const auto& x : sample_points(Vec3::Zero(), Vec3::Ones(), 100, 101)) {
      const Vec3 cc = curl_curl(CubeU0{}, CubeU1{}, CubeU2{}, x);
      worst = std::max(worst, (cc - j(Vec3(x[0], x[1], x[2]))).cwiseAbs().maxCoeff());
    }
    return worst;
  };
  p.divergence_defect = [] {
    // j = curl curl u, so div j is a third derivative combination of u.
    double worst = 0.0;
    for (const auto& x : sample_points(Vec3::Zero(), Vec3::Ones(), 100, 102)) {
      double div = 0.0;
      const CubeU0 u0;
      const CubeU1 u1;
      const CubeU2 u2;
      for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < 3; ++i) {
          // d_c (d_c d_i u_i - d_i d_i u_c)
          const double a = i == 0 ? ad::partial3(u0, x, c, i, c) : i == 1 ? ad::partial3(u1, x, c, i, c) : ad::partial3(u2, x, c, i, c);
          const double b = c == 0 ? ad::partial3(u0, x, i, i, c) : c == 1 ? ad::partial3(u1, x, i, i, c) : ad::partial3(u2, x, i, i, c);
          div += a - b;
        }
      }
      worst = std::max(worst, std::abs(div));
    }
    return worst;
  };
  return p;
}

ProblemSpec lbrick_singular() {
  ProblemSpec p;
  p.name = "lbrick_singular";
  p.description = "L-brick with a current derived from an edge-singular stream function (no exact error)";
  p.make_mesh = [](int n) { return l_brick_mesh(n); };
  p.mu = MaterialField(1.0);
  p.j = lbrick_current;
  p.touches_feature = [](const Mesh& m, int t) {
    return has_vertex_where(m, t, [](const Vec3& x) { return std::abs(x.x()) < 1e-12 && std::abs(x.y()) < 1e-12; });
  };
  p.consistency_defect = [] { return std::numeric_limits<double>::quiet_NaN(); };
  p.divergence_defect = [] {
    // div j = sum_i (d_y d_i d_i d_x psi - d_x d_i d_i d_y psi), away from the
    // re-entrant edge where psi is not smooth.
    double worst = 0.0;
    const LBrickPsi psi;
    auto keep = [](const Point& x) { return !(x[0] > 0 && x[1] < 0) && std::hypot(x[0], x[1]) > 1e-3; };
    for (const auto& x : sample_points(Vec3(-1, -1, 0), Vec3(1, 1, 1), 100, 103, keep)) {
      double div = 0.0;
      for (int i = 0; i < 3; ++i) div += ad::partial4(psi, x, i, i, 0, 1) - ad::partial4(psi, x, i, i, 1, 0);
      worst = std::max(worst, std::abs(div) / (1.0 + lbrick_current(Vec3(x[0], x[1], x[2])).norm()));
    }
    return worst;
  };
  return p;
}

ProblemSpec cube_jump_mu(double mu2) {
  ProblemSpec p;
  p.name = "cube_jump_mu_" + std::to_string(static_cast<long long>(std::llround(mu2)));
  p.description = "unit cube, mu = 1 for y, z < 1/2 and mu2 elsewhere, j = (1, 0, 0)";
  p.make_mesh = [](int n) {
    return unit_cube_mesh(n, [](const Vec3& c) { return (c.y() < 0.5 && c.z() < 0.5) ? 1 : 2; });
  };
  p.mu = MaterialField({{1, 1.0}, {2, mu2}}, 1.0);
  p.j = [](const Vec3&) { return Vec3(1.0, 0.0, 0.0); };
  p.j_degree = 0;
  p.touches_feature = [](const Mesh& m, int t) {
    return has_vertex_where(m, t, [](const Vec3& x) {
      return std::abs(x.y() - 0.5) < 1e-12 && std::abs(x.z() - 0.5) < 1e-12;
    });
  };
  p.consistency_defect = [] { return std::numeric_limits<double>::quiet_NaN(); };
  p.divergence_defect = [] { return 0.0; };
  return p;
}

std::vector<ProblemSpec> builtin_problems() {
  return {cube_poly(), lbrick_singular(), cube_jump_mu(10.0), cube_jump_mu(100.0), cube_jump_mu(1000.0)};
}

ProblemSpec problem_by_name(const std::string& name) {
  if (name == "cube_poly") return cube_poly();
  if (name == "lbrick_singular" || name == "lbrick") return lbrick_singular();
  if (name == "cube_jump_mu") return cube_jump_mu(1000.0);
  const std::string prefix = "cube_jump_mu_";
  if (name.rfind(prefix, 0) == 0) {
    try {
      std::size_t used = 0;
      const double mu2 = std::stod(name.substr(prefix.size()), &used);
      if (used == name.size() - prefix.size() && mu2 > 0) return cube_jump_mu(mu2);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem '" + name + "'");
}

}  // namespace ndeq
