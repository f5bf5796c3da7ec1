// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ndeq/fields.hpp"

namespace ndeq {

// mu_h^2 = sum_T h_T^2 / k^2 ||j - curl H_h||_T^2 + sum_f h_f / k ||[[H_h]]_t||_f^2
// over internal faces f.
struct ResidualResult {
  std::vector<double> volume_term;  // per tet, squared
  std::vector<double> face_term;    // per face, squared, zero on the boundary
  std::vector<double> mu_T;         // per tet, face terms split evenly between neighbours
  double mu_h = 0.0;
};

ResidualResult compute_residual_estimator(const Mesh& mesh, const MaterialField& mu,
                                          const CurrentDensity& j, const DiscreteField& Hh, int k,
                                          const ExecPolicy& exec = {});

}  // namespace ndeq
