// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Round-trip oracles for the element, face and node-patch solves. Each one
// manufactures data with a known answer and reports the worst relative
// deviation over random instances.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "ndeq/equilibrate.hpp"
#include "ndeq/mesh.hpp"
#include "ndeq/quadrature.hpp"

namespace ndeq::testing {

inline Mesh random_tet(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (;;) {
    std::vector<Vec3> x(4);
    for (auto& p : x) p = Vec3(d(rng), d(rng), d(rng));
    const double vol = signed_volume(x[0], x[1], x[2], x[3]);
    if (std::abs(vol) < 0.05) continue;
    if (vol < 0) std::swap(x[1], x[2]);
    return build_mesh(std::move(x), {{0, 1, 2, 3}});
  }
}

// Values of a (3 x nm) monomial coefficient block at xhat.
inline Vec3 eval_rows(const Eigen::VectorXd& c, const MonomialBasis& mb, const Vec3& xhat) {
  const int nm = mb.size();
  const Eigen::VectorXd m = mb.eval(xhat);
  return Vec3(c.segment(0, nm).dot(m), c.segment(nm, nm).dot(m), c.segment(2 * nm, nm).dot(m));
}

struct Step1Oracle {
  double curl_error = 0.0;        // ||curl H^ - curl v|| / ||curl v||
  double orthogonality = 0.0;     // max_a |(H^, grad psi_a)| / (||H^|| ||grad psi_a||)
  double projection_error = 0.0;  // ||H^ - (v - grad psi*)|| / ||v||
  double energy_excess = 0.0;     // max(0, ||H^|| - ||v||) / ||v||
};

// curl H^ = curl v for random v in R_k' on random tets; the answer is v minus
// its L2 projection onto grad P_k', computed here by normal equations.
inline Step1Oracle step1_roundtrip(int kp, int instances, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, kp);
  const auto& mb = R.monomials();
  const auto& ms = monomials(3, kp);
  const auto& qr = quadrature(QuadDomain::Tet, 2 * kp);
  Step1Oracle worst;
  for (int n = 0; n < instances; ++n) {
    const Mesh m = random_tet(rng);
    const auto g = element_geometry(m, 0);
    Eigen::VectorXd cv(R.dim());
    for (int i = 0; i < R.dim(); ++i) cv[i] = d(rng);
    const Eigen::VectorXd v_ref = R.coefficients() * cv;
    const Eigen::VectorXd curl_ref = R.curl_coefficients() * cv;
    auto v = [&](const Vec3& xh) { return Vec3(g.Jinv.transpose() * eval_rows(v_ref, mb, xh)); };
    auto curl_v = [&](const Vec3& xh) { return Vec3(g.J / g.det * eval_rows(curl_ref, mb, xh)); };

    const Eigen::VectorXd ch = solve_element_correction(g, kp, curl_v, 2 * kp);
    const Eigen::VectorXd h_ref = R.coefficients() * ch;
    const Eigen::VectorXd hc_ref = R.curl_coefficients() * ch;
    auto h = [&](const Vec3& xh) { return Vec3(g.Jinv.transpose() * eval_rows(h_ref, mb, xh)); };
    auto curl_h = [&](const Vec3& xh) { return Vec3(g.J / g.det * eval_rows(hc_ref, mb, xh)); };

    // Gradients of the non-constant monomials.
    const int np = ms.size() - 1;
    auto grad = [&](int a, const Vec3& xh) {
      Vec3 gr;
      for (int axis = 0; axis < 3; ++axis) gr[axis] = (ms.derivative(axis).col(a + 1)).dot(ms.eval(xh));
      return Vec3(g.Jinv.transpose() * gr);
    };
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(np, np);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(np);
    Eigen::VectorXd hg = Eigen::VectorXd::Zero(np), gn = Eigen::VectorXd::Zero(np);
    double cv2 = 0, dc2 = 0, v2 = 0, h2 = 0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Vec3& xh = qr.points[q];
      const double w = qr.weights[q] * g.absdet;
      std::vector<Vec3> gr(np);
      for (int a = 0; a < np; ++a) gr[a] = grad(a, xh);
      for (int a = 0; a < np; ++a) {
        for (int c = 0; c < np; ++c) M(a, c) += w * gr[a].dot(gr[c]);
        b[a] += w * gr[a].dot(v(xh));
        hg[a] += w * gr[a].dot(h(xh));
        gn[a] += w * gr[a].squaredNorm();
      }
      cv2 += w * curl_v(xh).squaredNorm();
      dc2 += w * (curl_h(xh) - curl_v(xh)).squaredNorm();
      v2 += w * v(xh).squaredNorm();
      h2 += w * h(xh).squaredNorm();
    }
    const Eigen::VectorXd psi = M.ldlt().solve(b);
    double pe2 = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Vec3& xh = qr.points[q];
      Vec3 target = v(xh);
      for (int a = 0; a < np; ++a) target -= psi[a] * grad(a, xh);
      pe2 += qr.weights[q] * g.absdet * (h(xh) - target).squaredNorm();
    }
    worst.curl_error = std::max(worst.curl_error, std::sqrt(dc2 / cv2));
    for (int a = 0; a < np; ++a) {
      worst.orthogonality = std::max(worst.orthogonality, std::abs(hg[a]) / std::sqrt(h2 * gn[a]));
    }
    worst.projection_error = std::max(worst.projection_error, std::sqrt(pe2 / v2));
    worst.energy_excess = std::max(worst.energy_excess, std::max(0.0, std::sqrt(h2) - std::sqrt(v2)) / std::sqrt(v2));
  }
  return worst;
}

// jhat = -n x grad_f lambda0 for random zero-mean lambda0 on random
// triangles; returns the worst ||lambda - lambda0|| / ||lambda0|| on the face.
inline double step2_roundtrip(int kp, int instances, FaceSolveMode mode, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const auto& mb = monomials(2, kp);
  const auto& qf = quadrature(QuadDomain::Triangle, 2 * kp);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    std::array<Vec3, 3> p;
    Vec3 e1, e2, nrm;
    do {
      for (auto& x : p) x = Vec3(d(rng), d(rng), d(rng));
      e1 = p[1] - p[0];
      e2 = p[2] - p[0];
      nrm = e1.cross(e2);
    } while (nrm.norm() < 0.1);
    const double jac = nrm.norm();
    nrm /= jac;
    Eigen::VectorXd c(mb.size());
    for (int i = 0; i < mb.size(); ++i) c[i] = d(rng);
    double mean = 0.0;
    for (std::size_t q = 0; q < qf.size(); ++q) mean += qf.weights[q] * c.dot(mb.eval(qf.points[q]));
    c[0] -= mean / 0.5;  // weights sum to 1/2
    const Eigen::VectorXd cs = mb.derivative(0) * c, ct = mb.derivative(1) * c;
    // Dual basis of (e1, e2) in the face plane.
    Eigen::Matrix2d G;
    G << e1.dot(e1), e1.dot(e2), e2.dot(e1), e2.dot(e2);
    const Eigen::Matrix2d Gi = G.inverse();
    const Vec3 d1 = Gi(0, 0) * e1 + Gi(0, 1) * e2, d2 = Gi(1, 0) * e1 + Gi(1, 1) * e2;
    auto jhat = [&](double s, double t) {
      const Eigen::VectorXd m = mb.eval(Vec3(s, t, 0));
      const Vec3 grad = cs.dot(m) * d1 + ct.dot(m) * d2;
      return Vec3(-nrm.cross(grad));
    };
    const auto res = solve_face_problem(p, nrm, kp, jhat, mode);
    double e2n = 0.0, l2 = 0.0;
    for (std::size_t q = 0; q < qf.size(); ++q) {
      const Eigen::VectorXd m = mb.eval(qf.points[q]);
      const double diff = (res.lambda - c).dot(m);
      e2n += qf.weights[q] * diff * diff;
      l2 += qf.weights[q] * c.dot(m) * c.dot(m);
    }
    worst = std::max(worst, std::sqrt(e2n / l2));
  }
  return worst;
}

// Ring of m tets around an edge: differences d_i = phi[i+1] - phi[i] summing
// to zero. The zero-sum solution is the prefix sum minus its mean.
inline double step3_ring(int instances, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::uniform_int_distribution<int> size(3, 8);
  double worst = 0.0;
  for (int n = 0; n < instances; ++n) {
    const int m = size(rng);
    std::vector<double> diff(m);
    double sum = 0.0;
    for (int i = 0; i + 1 < m; ++i) sum += diff[i] = d(rng);
    diff[m - 1] = -sum;
    std::vector<PatchEquation> eqs;
    for (int i = 0; i < m; ++i) eqs.push_back({(i + 1) % m, i, diff[i]});
    std::shuffle(eqs.begin(), eqs.end(), rng);
    Eigen::VectorXd expect(m);
    expect[0] = 0.0;
    for (int i = 1; i < m; ++i) expect[i] = expect[i - 1] + diff[i - 1];
    expect.array() -= expect.mean();
    const Eigen::VectorXd got = solve_node_patch(m, eqs);
    worst = std::max(worst, (got - expect).cwiseAbs().maxCoeff() / std::max(1.0, expect.cwiseAbs().maxCoeff()));
  }
  return worst;
}

}  // namespace ndeq::testing
