// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Inclusion checks for the discrete de Rham sequences on the reference
// simplices, shared by the unit tests and the acceptance driver.

#pragma once

#include <algorithm>
#include <random>

#include "ndeq/reference_space.hpp"

namespace ndeq::testing {

// Relative distance between a polynomial (monomial coefficients, possibly of
// lower degree) and its interpolant in `space`.
inline double representation_residual(const ReferenceSpace& space, const Eigen::VectorXd& coeffs) {
  const int nm = space.monomials().size();
  const int nc = space.value_dim();
  const int src = static_cast<int>(coeffs.size()) / nc;
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(nc * nm);
  for (int c = 0; c < nc; ++c) padded.segment(c * nm, src) = coeffs.segment(c * src, src);
  const Eigen::VectorXd recon = space.coefficients() * space.dofs_of(coeffs);
  const double scale = std::max(padded.norm(), 1e-300);
  return (recon - padded).norm() / scale;
}

struct SequenceResiduals {
  double grad_in_curl_space = 0;  // grad P_k in R_k
  double curl_in_div_space = 0;   // curl R_k in D_k
  double div_in_scalars = 0;      // div D_k in P_{k-1}
  double surface_curl = 0;        // curl_f P_k(f) in D_k(f)
  double surface_kernel = 0;      // curl_f of constants
};

// Worst residuals over `samples` random members of each space.
inline SequenceResiduals exact_sequence_residuals(int k, int samples, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto random_vec = [&](int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = d(rng);
    return v;
  };
  const auto& P = reference_space(SpaceKind::P_scalar_tet, k);
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, k);
  const auto& D = reference_space(SpaceKind::RT_tet, k);
  const auto& Pf = reference_space(SpaceKind::P_scalar_tri, k);
  const auto& Df = reference_space(SpaceKind::RTtangential_tri, k);
  SequenceResiduals r;
  for (int s = 0; s < samples; ++s) {
    const Eigen::VectorXd grad = P.grad_coefficients() * random_vec(P.dim());
    r.grad_in_curl_space = std::max(r.grad_in_curl_space, representation_residual(R, grad));

    const Eigen::VectorXd curl = R.curl_coefficients() * random_vec(R.dim());
    r.curl_in_div_space = std::max(r.curl_in_div_space, representation_residual(D, curl));

    const Eigen::VectorXd div = D.div_coefficients() * random_vec(D.dim());
    double top = 0.0;
    const auto& mb = D.monomials();
    for (int i = 0; i < mb.size(); ++i) {
      if (mb.total_degree(i) >= k) top = std::max(top, std::abs(div[i]));
    }
    r.div_in_scalars = std::max(r.div_in_scalars, top / std::max(div.norm(), 1e-300));

    const Eigen::VectorXd scurl = Pf.curl_coefficients() * random_vec(Pf.dim());
    r.surface_curl = std::max(r.surface_curl, representation_residual(Df, scurl));
  }
  // The constant function: interpolate 1 and take its surface curl.
  const Eigen::VectorXd one = Pf.interpolate([](const Vec3&) { return Eigen::VectorXd::Ones(1); });
  r.surface_kernel = (Pf.curl_coefficients() * one).norm();
  return r;
}

}  // namespace ndeq::testing
