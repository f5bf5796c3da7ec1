// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "ndeq/problems.hpp"
#include "ndeq/quadrature.hpp"

namespace ndeq {

EnergyError compute_error(const Mesh& mesh, const MaterialField& mu, const BrokenVectorField& F,
                          const VectorFunction& H, int exactness, const ExecPolicy& exec) {
  const auto& qr = quadrature(QuadDomain::Tet, std::min(exactness, kMaxQuadratureExactness));
  EnergyError out;
  out.per_tet.assign(mesh.num_tets(), 0.0);
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    double s = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Vec3& xh = qr.points[q];
      const Vec3 fv = F.cells.empty() ? Vec3::Zero() : F.eval(ti, xh);
      s += qr.weights[q] * (H(g.map(xh)) - fv).squaredNorm();
    }
    out.per_tet[t] = std::sqrt(mu.mu_on(mesh, ti) * g.absdet * s);
  });
  double s = 0.0;
  for (double e : out.per_tet) s += e * e;
  out.total = std::sqrt(s);
  return out;
}

}  // namespace ndeq
