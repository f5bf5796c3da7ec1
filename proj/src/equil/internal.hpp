// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "ndeq/element.hpp"
#include "ndeq/quadrature.hpp"
#include "ndeq/reference_space.hpp"

namespace ndeq::detail {

// out[c](i, q) = sum_a M(c, a) ref[a](i, q)
inline std::array<RowMatrix, 3> mapped(const BasisTable& ref, const Mat3& M) {
  std::array<RowMatrix, 3> out;
  for (int c = 0; c < 3; ++c) {
    out[c] = M(c, 0) * ref.comp[0] + M(c, 1) * ref.comp[1] + M(c, 2) * ref.comp[2];
  }
  return out;
}

// Triangle with vertices in ascending global id and the parametrisation
// x = p[0] + s e1 + t e2.
struct FacePatch {
  std::array<Vec3, 3> p;
  Vec3 e1, e2;
  double jac = 0.0;  // |e1 x e2| = 2 area
  Vec3 at(double s, double t) const { return p[0] + s * e1 + t * e2; }
};

inline FacePatch face_patch(const std::array<Vec3, 3>& p) {
  FacePatch fp;
  fp.p = p;
  fp.e1 = p[1] - p[0];
  fp.e2 = p[2] - p[0];
  fp.jac = fp.e1.cross(fp.e2).norm();
  return fp;
}

inline FacePatch face_patch(const Mesh& mesh, int f) {
  const auto& v = mesh.face(f).v;
  return face_patch({mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])});
}

inline int clamp_exactness(int e) { return e > kMaxQuadratureExactness ? kMaxQuadratureExactness : e; }

}  // namespace ndeq::detail
