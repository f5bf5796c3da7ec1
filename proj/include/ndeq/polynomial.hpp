// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "ndeq/common.hpp"

namespace ndeq {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Monomials in 2 or 3 variables up to a total degree, ordered by total
// degree first. A lower-degree basis is therefore a prefix of a higher one
// and coefficient vectors can be promoted by zero padding.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int degree);

  static int count(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const std::array<int, 3>& exponent(int i) const { return exps_[i]; }
  int total_degree(int i) const { return exps_[i][0] + exps_[i][1] + exps_[i][2]; }
  // -1 when the exponent is outside the basis.
  int index(const std::array<int, 3>& e) const;

  Eigen::VectorXd eval(const Vec3& x) const;
  // size() x points.size()
  Eigen::MatrixXd table(const std::vector<Vec3>& points) const;
  // Exact d/dx_axis acting on coefficient vectors.
  const Eigen::MatrixXd& derivative(int axis) const { return deriv_[axis]; }
  // Coefficients of x_axis * p for p of degree < degree().
  Eigen::MatrixXd multiply(int axis) const;

 private:
  int dim_, degree_;
  std::vector<std::array<int, 3>> exps_;
  std::vector<int> lookup_;  // dense (degree+1)^3 table
  std::array<Eigen::MatrixXd, 3> deriv_;
};

// Shared instances, built on first use.
const MonomialBasis& monomials(int dim, int degree);

// Vector polynomial in the reference coordinates of one element; the values
// are physical vectors.
struct VecPoly {
  int degree = 0;
  Eigen::Matrix<double, 3, Eigen::Dynamic> c;

  VecPoly() = default;
  explicit VecPoly(int deg);
  Vec3 eval(const Vec3& xhat) const;
  // Zero-padded copy at a higher degree.
  VecPoly promoted(int deg) const;
  VecPoly& operator+=(const VecPoly& o);
  VecPoly& operator-=(const VecPoly& o);
};

VecPoly operator+(VecPoly a, const VecPoly& b);
VecPoly operator-(VecPoly a, const VecPoly& b);

// Physical curl and gradient given Jinv (reference-to-physical derivative map
// d/dx = Jinv^T d/dxhat). Coefficients are in reference coordinates.
VecPoly physical_curl(const VecPoly& v, const Mat3& Jinv);
VecPoly physical_gradient(const Eigen::VectorXd& scalar, int degree, const Mat3& Jinv);
// Physical divergence as scalar coefficients.
Eigen::VectorXd physical_divergence(const VecPoly& v, const Mat3& Jinv);

}  // namespace ndeq
