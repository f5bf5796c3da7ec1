// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "ndeq/fields.hpp"

namespace ndeq {

// How the 2D curl problem on a face is discretised.
//   Weak:   least squares for grad_f lambda against n x jhat, bordered by the
//           zero-mean condition.
//   Strong: interpolate jhat on the degree-k' face lattice and match the
//           monomial coefficients of d/ds lambda and d/dt lambda.
enum class FaceSolveMode { Weak, Strong };

struct EquilibrationOptions {
  int degree = 1;  // k' >= k
  // Requires a piecewise-polynomial current and turns the compatibility
  // diagnostics (div j, face divergence, patch consistency) into errors.
  bool strict_a2 = false;
  FaceSolveMode face_mode = FaceSolveMode::Weak;
  double osc_tol = 1e-9;  // relative, strict mode only
  double lsq_tol = 1e-8;  // relative to max |lambda|
  ExecPolicy exec;
};

// Element corrections H^ per tet, curl H^ = j - curl H_h, orthogonal to
// gradients in the mu-weighted L2 product.
struct ElementCorrection {
  int degree = 0;
  std::vector<Eigen::VectorXd> coefficients;  // in the R_k' reference basis
  BrokenVectorField H;                        // physical values, degree k'
  // ||curl H^ - (j - curl H_h)||_T; zero when the current is in D_k'.
  std::vector<double> residual;
  // ||div j||_T for piecewise-polynomial currents; -1 when not computable.
  std::vector<double> data_divergence;
  // ||j - curl H_h||_T
  std::vector<double> current_norm;
  double max_residual() const;
  // (sum_T (h_T / pi)^2 ||curl H^ - j^D_T||_T^2)^{1/2}
  double oscillation(const Mesh& mesh) const;
};

ElementCorrection step1_element_corrections(const Mesh& mesh, const MaterialField& mu,
                                            const CurrentDensity& j, const DiscreteField& Hh,
                                            const EquilibrationOptions& opts);

// Single-element solve exposed for oracles: returns the R_k' reference
// coefficients of H^ with curl H^ the L2 projection of `target` onto
// curl R_k'(T) and (H^, grad psi)_T = 0 for psi in P_k'(T). `residual`
// receives ||curl H^ - target||_T.
Eigen::VectorXd solve_element_correction(const ElementGeometry& g, int degree,
                                         const std::function<Vec3(const Vec3& xhat)>& target,
                                         int exactness, double* residual = nullptr);

// Face coordinates: x = p0 + s (p1 - p0) + t (p2 - p0) with p0 < p1 < p2 the
// face vertices by global id. Face polynomials are monomials in (s, t).
struct FaceProblemResult {
  Eigen::VectorXd lambda;     // monomials(2, k') coefficients
  double jump_norm = 0.0;     // ||jhat||_f
  double divergence = 0.0;    // ||div_f jhat||_f
  double residual = 0.0;      // ||-n x grad_f lambda - jhat||_f
  double mean = 0.0;          // (lambda, 1)_f
};

// Solves -n x grad_f lambda = jhat, (lambda, 1)_f = 0 on triangle p with unit
// normal n. jhat is given in face coordinates. Throws FaceSolveSingular.
FaceProblemResult solve_face_problem(const std::array<Vec3, 3>& p, const Vec3& n, int degree,
                                     const std::function<Vec3(double s, double t)>& jhat,
                                     FaceSolveMode mode);

struct FaceMultiplier {
  int degree = 0;
  std::vector<int> faces;         // internal faces, ascending
  std::vector<int> slot_of_face;  // face id -> index into `faces`, or -1
  std::vector<FaceProblemResult> solutions;
  std::size_t size() const { return faces.size(); }
  double eval(int slot, double s, double t) const;
  // Value at a point given by barycentric weights of global vertices.
  double eval_barycentric(const Mesh& mesh, int slot,
                          const std::vector<std::pair<int, double>>& weights) const;
  // max over faces of |lambda| on the degree-k' face lattice
  double max_abs() const;
  double max_divergence() const;
  double max_residual() const;
};

FaceMultiplier step2_face_multipliers(const Mesh& mesh, const DiscreteField& Hh,
                                      const ElementCorrection& correction,
                                      const EquilibrationOptions& opts);

// r_e = sum_f (n_f . n_fe) lambda_f on internal edges, at Gauss points.
struct EdgeCompatibility {
  std::vector<int> edges;
  std::vector<double> max_abs;    // max |r_e| per edge
  std::vector<double> variation;  // max r_e - min r_e per edge
  double max_abs_all() const;
  double max_variation() const;
};
EdgeCompatibility check_edge_compatibility(const Mesh& mesh, const FaceMultiplier& lambdas);

// One difference equation phi[plus] - phi[minus] = value of a node patch.
struct PatchEquation {
  int plus;
  int minus;
  double value;
};
// Least-squares solution of the difference equations plus the zero-sum row
// on m unknowns. `residual` receives the max-norm residual.
Eigen::VectorXd solve_node_patch(int m, const std::vector<PatchEquation>& eqs,
                                 double* residual = nullptr);

struct NodalPotential {
  int degree = 0;
  struct Node {
    std::vector<std::pair<int, int>> key;      // (global vertex, lattice count), ascending
    std::vector<std::pair<int, int>> members;  // (tet, local lattice node)
  };
  std::vector<Node> nodes;
  // Per tet: values at lagrange_nodes(k') and reference monomial coefficients.
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::VectorXd> coefficients;
  double max_patch_residual = 0.0;
  std::size_t fast_path_nodes = 0;
  std::size_t least_squares_nodes = 0;
  BrokenVectorField gradient(const Mesh& mesh) const;
};

NodalPotential step3_reconstruct_phi(const Mesh& mesh, const FaceMultiplier& lambdas,
                                     const EquilibrationOptions& opts);

struct EstimatorResult {
  std::vector<double> eta;  // per tet
  double eta_h = 0.0;
  BrokenVectorField H_hat;    // Step 1 correction
  BrokenVectorField H_tilde;  // H^ + grad_h phi
};

EstimatorResult step4_estimator(const Mesh& mesh, const MaterialField& mu,
                                const ElementCorrection& correction, const NodalPotential& phi,
                                const ExecPolicy& exec = {});

struct EquilibriumReport {
  double max_element_residual = 0.0;  // max_T ||curl(H_h + H~) - j||_T
  double max_face_jump = 0.0;         // max_f ||[[H_h + H~]]_t||_f
  double scale = 0.0;                 // ||j|| + ||H_h|| / h_max
  double element_relative = 0.0;
  double face_relative = 0.0;         // face jump / (scale sqrt(h_max))
  double gradient_orthogonality = 0.0;
  bool passed = false;
};

// Checks curl(H_h + H~) = j elementwise, tangential continuity of
// H_h + H~, and sum_f ([[H_h + H^]]_t, grad psi)_f = 0 for random continuous
// psi vanishing on the boundary. Throws EquilibriumViolated when
// `throw_on_failure` and either relative residual exceeds `tol`.
EquilibriumReport verify_equilibrium(const Mesh& mesh, const CurrentDensity& j,
                                     const DiscreteField& Hh, const EstimatorResult& result,
                                     double tol = 1e-9, bool throw_on_failure = true,
                                     unsigned seed = 7);

struct EquilibrationResult {
  ElementCorrection step1;
  FaceMultiplier step2;
  EdgeCompatibility edges;
  NodalPotential step3;
  EstimatorResult estimate;
  double seconds[4] = {0, 0, 0, 0};
};

// Steps 1-4 and the edge compatibility diagnostic.
EquilibrationResult equilibrate(const Mesh& mesh, const MaterialField& mu, const CurrentDensity& j,
                                const DiscreteField& Hh, const EquilibrationOptions& opts);

}  // namespace ndeq
