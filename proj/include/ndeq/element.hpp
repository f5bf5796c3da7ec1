// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "ndeq/mesh.hpp"

namespace ndeq {

// Affine map x = x0 + J xhat built from the ascending vertex order, so det
// may be negative. Neighbouring elements parametrise shared edges and faces
// identically.
struct ElementGeometry {
  std::array<int, 4> v;
  Vec3 x0;
  Mat3 J, Jinv;
  double det = 0.0;
  double absdet = 0.0;

  Vec3 map(const Vec3& xhat) const { return x0 + J * xhat; }
  Vec3 to_reference(const Vec3& x) const { return Jinv * (x - x0); }
};

ElementGeometry element_geometry(const Mesh& mesh, int t);

// Reference coordinates of the sorted vertex `i` of a tet.
const Vec3& reference_vertex(int i);

}  // namespace ndeq
