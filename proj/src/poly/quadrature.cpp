// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace ndeq {

void gauss_jacobi(int n, double alpha, std::vector<double>& x, std::vector<double>& w) {
  // Golub-Welsch on the Jacobi matrix of the (alpha, 0) recurrence.
  const double beta = 0.0;
  const double ab = alpha + beta;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double k = i;
    const double den = (2 * k + ab) * (2 * k + ab + 2);
    T(i, i) = (i == 0) ? (beta - alpha) / (ab + 2) : (beta * beta - alpha * alpha) / den;
    if (i + 1 < n) {
      const double m = i + 1;
      const double s = 2 * m + ab;
      const double b2 = 4 * m * (m + alpha) * (m + beta) * (m + ab) / (s * s * (s + 1) * (s - 1));
      T(i, i + 1) = T(i + 1, i) = std::sqrt(b2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::pow(2.0, ab + 1) * std::tgamma(alpha + 1) * std::tgamma(beta + 1) /
                     std::tgamma(ab + 2);
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    x[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0;
  }
}

namespace {

// Rule on [0,1] for weight (1-u)^alpha.
void unit_rule(int n, int alpha, std::vector<double>& u, std::vector<double>& w) {
  gauss_jacobi(n, alpha, u, w);
  const double scale = std::pow(0.5, alpha + 1);
  for (int i = 0; i < n; ++i) {
    u[i] = 0.5 * (u[i] + 1.0);
    w[i] *= scale;
  }
}

QuadratureRule build(QuadDomain domain, int exactness) {
  QuadratureRule r;
  r.domain = domain;
  r.exactness = exactness;
  const int n = std::max(1, (exactness + 2) / 2);
  if (domain == QuadDomain::Segment) {
    std::vector<double> u, w;
    unit_rule(n, 0, u, w);
    for (int i = 0; i < n; ++i) {
      r.points.emplace_back(u[i], 0.0, 0.0);
      r.weights.push_back(w[i]);
    }
  } else if (domain == QuadDomain::Triangle) {
    std::vector<double> u, wu, v, wv;
    unit_rule(n, 1, u, wu);
    unit_rule(n, 0, v, wv);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        r.points.emplace_back(u[i], (1 - u[i]) * v[j], 0.0);
        r.weights.push_back(wu[i] * wv[j]);
      }
    }
  } else {
    std::vector<double> u, wu, v, wv, s, ws;
    unit_rule(n, 2, u, wu);
    unit_rule(n, 1, v, wv);
    unit_rule(n, 0, s, ws);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          r.points.emplace_back(u[i], (1 - u[i]) * v[j], (1 - u[i]) * (1 - v[j]) * s[k]);
          r.weights.push_back(wu[i] * wv[j] * ws[k]);
        }
      }
    }
  }
  return r;
}

}  // namespace

const QuadratureRule& quadrature(QuadDomain domain, int exactness) {
  if (exactness < 0 || exactness > kMaxQuadratureExactness) {
    throw Error(ErrorCode::UnsupportedDegree,
                "quadrature exactness " + std::to_string(exactness) + " not supported");
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{static_cast<int>(domain), exactness}];
  if (!slot) slot = std::make_unique<QuadratureRule>(build(domain, exactness));
  return *slot;
}

}  // namespace ndeq
