// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/residual.hpp"

#include <algorithm>
#include <cmath>

#include "ndeq/quadrature.hpp"

namespace ndeq {

ResidualResult compute_residual_estimator(const Mesh& mesh, const MaterialField& mu,
                                          const CurrentDensity& j, const DiscreteField& Hh, int k,
                                          const ExecPolicy& exec) {
  (void)mu;  // the estimator is defined without material weights
  const std::size_t nt = mesh.num_tets();
  const std::size_t nf = mesh.num_faces();
  ResidualResult out;
  out.volume_term.assign(nt, 0.0);
  out.face_term.assign(nf, 0.0);
  out.mu_T.assign(nt, 0.0);

  // |j - j_h|^2 is polynomial of degree 2 max(deg j, k - 2) for polynomial j.
  const auto& qt = quadrature(QuadDomain::Tet, j.norm_exactness(std::max(k - 2, 0)));
  parallel_for(nt, exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    double s = 0.0;
    for (std::size_t q = 0; q < qt.size(); ++q) {
      s += qt.weights[q] * (j.value(ti, g, qt.points[q]) - Hh.jh.eval(ti, qt.points[q])).squaredNorm();
    }
    const double h = mesh.tet_diameter(ti);
    out.volume_term[t] = h * h / (k * k) * s * g.absdet;
  });

  const auto& qf = quadrature(QuadDomain::Triangle, std::min(2 * std::max(k - 1, 0), kMaxQuadratureExactness));
  parallel_for(nf, exec, [&](std::size_t f) {
    const Face& face = mesh.face(static_cast<int>(f));
    if (face.is_boundary()) return;
    const Vec3& p0 = mesh.vertex(face.v[0]);
    const Vec3 e1 = mesh.vertex(face.v[1]) - p0;
    const Vec3 e2 = mesh.vertex(face.v[2]) - p0;
    double s = 0.0;
    for (std::size_t q = 0; q < qf.size(); ++q) {
      const Vec3 x = p0 + qf.points[q].x() * e1 + qf.points[q].y() * e2;
      s += qf.weights[q] * tangential_jump(mesh, Hh.H, static_cast<int>(f), x).squaredNorm();
    }
    out.face_term[f] = mesh.face_diameter(static_cast<int>(f)) / k * s * 2.0 * face.area;
  });

  double total = 0.0;
  std::vector<double> sq(out.volume_term);
  for (std::size_t f = 0; f < nf; ++f) {
    const Face& face = mesh.face(static_cast<int>(f));
    if (face.is_boundary()) continue;
    sq[face.plus] += 0.5 * out.face_term[f];
    sq[face.minus] += 0.5 * out.face_term[f];
  }
  for (std::size_t t = 0; t < nt; ++t) {
    out.mu_T[t] = std::sqrt(sq[t]);
    total += sq[t];
  }
  out.mu_h = std::sqrt(total);
  return out;
}

}  // namespace ndeq
