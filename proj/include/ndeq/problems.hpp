// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ndeq/fields.hpp"

namespace ndeq {

struct ProblemSpec {
  std::string name;
  std::string description;
  std::function<Mesh(int n)> make_mesh;
  MaterialField mu;
  VectorFunction j;
  int j_degree = -1;  // polynomial degree of j, -1 if not polynomial
  std::optional<VectorFunction> u_exact;
  std::optional<VectorFunction> H_exact;
  // True when H_exact may be used for error and efficiency figures.
  bool trusted_exact = false;
  // Tets adjacent to the geometric feature adaptivity should resolve.
  std::function<bool(const Mesh&, int)> touches_feature;
  // Max |j - curl(mu^{-1} curl u)| over 100 random points, by automatic
  // differentiation; NaN when no exact u is known.
  std::function<double()> consistency_defect;
  // Max |div j| over 100 random points, by automatic differentiation.
  std::function<double()> divergence_defect;
};

ProblemSpec cube_poly();
ProblemSpec lbrick_singular();
ProblemSpec cube_jump_mu(double mu2);

std::vector<ProblemSpec> builtin_problems();

// ||mu^{1/2} (H - F)||_T per tet and over the mesh for a broken field F,
// with the given quadrature exactness (capped at the maximum available).
struct EnergyError {
  std::vector<double> per_tet;
  double total = 0.0;
};
EnergyError compute_error(const Mesh& mesh, const MaterialField& mu, const BrokenVectorField& F,
                          const VectorFunction& H, int exactness, const ExecPolicy& exec = {});
// Accepts builtin names plus cube_jump_mu (mu2 = 1000) and cube_jump_mu_<mu2>.
ProblemSpec problem_by_name(const std::string& name);

}  // namespace ndeq
