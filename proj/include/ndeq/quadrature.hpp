// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ndeq/common.hpp"

namespace ndeq {

enum class QuadDomain { Segment, Triangle, Tet };

// Points in reference coordinates: segment [0,1] uses x, the triangle
// {x,y >= 0, x+y <= 1} uses (x,y), the tet uses (x,y,z).
struct QuadratureRule {
  QuadDomain domain;
  int exactness = 0;
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::size_t size() const { return points.size(); }
};

inline constexpr int kMaxQuadratureExactness = 12;

// Collapsed Gauss-Jacobi product rule exact for polynomials of total degree
// <= exactness. Throws UnsupportedDegree above kMaxQuadratureExactness.
const QuadratureRule& quadrature(QuadDomain domain, int exactness);

// n-point Gauss-Jacobi rule for weight (1-x)^alpha on [-1, 1].
void gauss_jacobi(int n, double alpha, std::vector<double>& x, std::vector<double>& w);

}  // namespace ndeq
