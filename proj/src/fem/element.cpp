// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/element.hpp"

#include <cmath>

namespace ndeq {

ElementGeometry element_geometry(const Mesh& mesh, int t) {
  ElementGeometry g;
  g.v = mesh.sorted_tet(t);
  g.x0 = mesh.vertex(g.v[0]);
  for (int a = 0; a < 3; ++a) g.J.col(a) = mesh.vertex(g.v[a + 1]) - g.x0;
  g.det = g.J.determinant();
  g.absdet = std::abs(g.det);
  if (!(g.absdet > 0.0)) throw Error(ErrorCode::SingularJacobian, "element " + std::to_string(t));
  g.Jinv = g.J.inverse();
  return g;
}

const Vec3& reference_vertex(int i) {
  static const std::array<Vec3, 4> v{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  return v[i];
}

}  // namespace ndeq
