// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/polynomial.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace ndeq {

int MonomialBasis::count(int dim, int degree) {
  if (degree < 0) return 0;
  if (dim == 2) return (degree + 1) * (degree + 2) / 2;
  return (degree + 1) * (degree + 2) * (degree + 3) / 6;
}

MonomialBasis::MonomialBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim != 2 && dim != 3) throw Error(ErrorCode::InvalidArgument, "monomial dimension must be 2 or 3");
  if (degree < 0 || degree > 15) throw Error(ErrorCode::UnsupportedDegree, "monomial degree out of range");
  const int side = degree + 1;
  lookup_.assign(side * side * side, -1);
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      if (dim == 2) {
        const std::array<int, 3> e{a, d - a, 0};
        lookup_[e[0] + side * (e[1] + side * e[2])] = static_cast<int>(exps_.size());
        exps_.push_back(e);
        continue;
      }
      for (int b = d - a; b >= 0; --b) {
        const std::array<int, 3> e{a, b, d - a - b};
        lookup_[e[0] + side * (e[1] + side * e[2])] = static_cast<int>(exps_.size());
        exps_.push_back(e);
      }
    }
  }
  const int n = size();
  for (int axis = 0; axis < 3; ++axis) {
    deriv_[axis] = Eigen::MatrixXd::Zero(n, n);
    if (axis >= dim) continue;
    for (int i = 0; i < n; ++i) {
      auto e = exps_[i];
      if (e[axis] == 0) continue;
      const int p = e[axis];
      --e[axis];
      deriv_[axis](index(e), i) = p;
    }
  }
}

int MonomialBasis::index(const std::array<int, 3>& e) const {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0) return -1;
  if (e[0] + e[1] + e[2] > degree_) return -1;
  if (dim_ == 2 && e[2] != 0) return -1;
  const int side = degree_ + 1;
  return lookup_[e[0] + side * (e[1] + side * e[2])];
}

Eigen::VectorXd MonomialBasis::eval(const Vec3& x) const {
  std::array<std::array<double, 16>, 3> pw{};
  for (int a = 0; a < 3; ++a) {
    pw[a][0] = 1.0;
    for (int p = 1; p <= degree_; ++p) pw[a][p] = pw[a][p - 1] * x[a];
  }
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) {
    const auto& e = exps_[i];
    v[i] = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
  }
  return v;
}

Eigen::MatrixXd MonomialBasis::table(const std::vector<Vec3>& points) const {
  Eigen::MatrixXd t(size(), points.size());
  for (std::size_t q = 0; q < points.size(); ++q) t.col(q) = eval(points[q]);
  return t;
}

Eigen::MatrixXd MonomialBasis::multiply(int axis) const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (total_degree(i) == degree_) continue;
    auto e = exps_[i];
    ++e[axis];
    m(index(e), i) = 1.0;
  }
  return m;
}

const MonomialBasis& monomials(int dim, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<MonomialBasis>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{dim, degree}];
  if (!slot) slot = std::make_unique<MonomialBasis>(dim, degree);
  return *slot;
}

VecPoly::VecPoly(int deg) : degree(deg), c(Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, MonomialBasis::count(3, deg))) {}

Vec3 VecPoly::eval(const Vec3& xhat) const { return c * monomials(3, degree).eval(xhat); }

VecPoly VecPoly::promoted(int deg) const {
  if (deg <= degree) return *this;
  VecPoly out(deg);
  out.c.leftCols(c.cols()) = c;
  return out;
}

VecPoly& VecPoly::operator+=(const VecPoly& o) {
  if (o.degree > degree) *this = promoted(o.degree);
  c.leftCols(o.c.cols()) += o.c;
  return *this;
}

VecPoly& VecPoly::operator-=(const VecPoly& o) {
  if (o.degree > degree) *this = promoted(o.degree);
  c.leftCols(o.c.cols()) -= o.c;
  return *this;
}

VecPoly operator+(VecPoly a, const VecPoly& b) { return a += b; }
VecPoly operator-(VecPoly a, const VecPoly& b) { return a -= b; }

namespace {

// Rows: physical derivative d/dx_i of each component, as coefficient rows.
std::array<Eigen::Matrix<double, 3, Eigen::Dynamic>, 3> physical_partials(const VecPoly& v,
                                                                           const Mat3& Jinv) {
  const auto& mb = monomials(3, v.degree);
  std::array<Eigen::Matrix<double, 3, Eigen::Dynamic>, 3> ref;
  for (int a = 0; a < 3; ++a) ref[a] = v.c * mb.derivative(a).transpose();
  std::array<Eigen::Matrix<double, 3, Eigen::Dynamic>, 3> phys;
  for (int i = 0; i < 3; ++i) {
    phys[i] = Eigen::Matrix<double, 3, Eigen::Dynamic>::Zero(3, v.c.cols());
    // d/dx_i = sum_a Jinv(a, i) d/dxhat_a
    for (int a = 0; a < 3; ++a) phys[i] += Jinv(a, i) * ref[a];
  }
  return phys;
}

}  // namespace

VecPoly physical_curl(const VecPoly& v, const Mat3& Jinv) {
  const auto d = physical_partials(v, Jinv);
  VecPoly out(v.degree);
  out.c.row(0) = d[1].row(2) - d[2].row(1);
  out.c.row(1) = d[2].row(0) - d[0].row(2);
  out.c.row(2) = d[0].row(1) - d[1].row(0);
  return out;
}

VecPoly physical_gradient(const Eigen::VectorXd& scalar, int degree, const Mat3& Jinv) {
  const auto& mb = monomials(3, degree);
  VecPoly out(degree);
  for (int a = 0; a < 3; ++a) {
    const Eigen::VectorXd da = mb.derivative(a) * scalar;
    for (int i = 0; i < 3; ++i) out.c.row(i) += Jinv(a, i) * da.transpose();
  }
  return out;
}

Eigen::VectorXd physical_divergence(const VecPoly& v, const Mat3& Jinv) {
  const auto d = physical_partials(v, Jinv);
  return (d[0].row(0) + d[1].row(1) + d[2].row(2)).transpose();
}

}  // namespace ndeq
