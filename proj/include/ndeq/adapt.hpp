// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "ndeq/equilibrate.hpp"
#include "ndeq/problems.hpp"
#include "ndeq/solver.hpp"

namespace ndeq {

enum class EstimatorChoice { Equilibrated, Residual, Both };
enum class RefinementMode { Uniform, Adaptive };

const char* to_string(EstimatorChoice e);
const char* to_string(RefinementMode m);

struct AdaptiveConfig {
  double theta = 0.5;
  int max_levels = 4;
  std::size_t max_dofs = 200000;
  EstimatorChoice estimator = EstimatorChoice::Both;
  int degree = 1;
  int aux_degree = 0;  // k'; 0 means k' = k
  RefinementMode mode = RefinementMode::Adaptive;
  int initial_n = 2;  // resolution of the first mesh; uniform mode doubles it
  bool strict_a2 = false;
  FaceSolveMode face_mode = FaceSolveMode::Weak;
  SolverConfig solver;
  ExecPolicy exec;
  // Extra adaptive levels for a reference solution when no exact field is
  // trusted; 0 disables it.
  int reference_levels = 0;

  int k_aux() const { return aux_degree > 0 ? aux_degree : degree; }
  void validate() const;
};

struct LevelTimings {
  double assemble = 0, solve = 0, step1 = 0, step2 = 0, step3 = 0, step4 = 0;
  double residual = 0, error = 0, mark = 0, refine = 0;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LevelRecord {
  int level = 0;
  int resolution = 0;  // n of the generated mesh in uniform mode, else 0
  std::size_t n_tets = 0;
  std::size_t n_dofs = 0;  // free Nedelec dofs
  double h_max = 0;
  double error = kNaN;  // ||mu^{1/2}(H - H_h)||
  double reference_error = kNaN;
  double eta = kNaN;
  double mu_res = kNaN;
  double eff_eq = kNaN;
  double eff_res = kNaN;
  double oscillation = kNaN;
  double step1_residual = kNaN;  // max_T ||curl H^ - j^D_T||_T
  double lambda_max = kNaN;
  double max_re = kNaN;
  double max_re_variation = kNaN;
  double max_face_divergence = kNaN;
  double max_patch_residual = kNaN;
  bool a2 = false;  // current in D_k' (natively or by projection)
  double eq_element_relative = kNaN;
  double eq_face_relative = kNaN;
  double eq_gradient_orthogonality = kNaN;
  bool equilibrium_passed = false;
  double pythagoras_defect = kNaN;  // relative to eta^2
  double local_efficiency = kNaN;   // max_T eta_T / error on T and its face neighbours
  std::size_t marked = 0;
  std::size_t marked_near_feature = 0;
  std::size_t tets_near_feature = 0;
  int solver_iterations = 0;
  double solver_residual = 0;
  LevelTimings seconds;
};

// Per-tet fields of one level, for visual output.
struct LevelFields {
  std::vector<double> eta;
  std::vector<double> mu_T;
  std::vector<double> error;
};

// Greedy minimal Doerfler set: descending eta, ties by ascending id, until
// the covered share of sum eta^2 reaches theta.
std::set<int> dorfler_mark(const std::vector<double>& etas, double theta);

// Everything computed on one mesh.
struct LevelSolution {
  LevelRecord record;
  LevelFields fields;
  DiscreteField Hh;
  EquilibrationResult equilibration;
};
LevelSolution solve_level(const Mesh& mesh, const ProblemSpec& spec, const AdaptiveConfig& cfg);

using LevelCallback = std::function<void(const Mesh&, const LevelRecord&, const LevelFields&)>;

// solve -> estimate -> mark -> refine until max_levels or max_dofs.
std::vector<LevelRecord> adaptive_loop(const ProblemSpec& spec, const AdaptiveConfig& cfg,
                                       const LevelCallback& on_level = {});

}  // namespace ndeq
