// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ndeq/dofmap.hpp"
#include "ndeq/element.hpp"
#include "ndeq/polynomial.hpp"

namespace ndeq {

// Piecewise-constant permeability keyed by subdomain tag.
class MaterialField {
 public:
  MaterialField() = default;
  explicit MaterialField(double constant) : fallback_(constant) { check(constant); }
  MaterialField(std::map<int, double> by_tag, double fallback);

  double mu(int tag) const;
  double mu_on(const Mesh& mesh, int t) const { return mu(mesh.subdomain_tag(t)); }
  double mu_min() const;
  double mu_max() const;
  bool is_constant() const { return by_tag_.empty(); }

 private:
  static void check(double v);
  std::map<int, double> by_tag_;
  double fallback_ = 1.0;
};

// One vector polynomial per tet, in that tet's reference coordinates.
struct BrokenVectorField {
  std::vector<VecPoly> cells;
  Vec3 eval(int t, const Vec3& xhat) const { return cells[t].eval(xhat); }
  int degree() const { return cells.empty() ? 0 : cells.front().degree; }
};

using VectorFunction = std::function<Vec3(const Vec3&)>;

// Either a closed-form field or an elementwise polynomial (for example the
// Raviart-Thomas interpolant of a closed form).
class CurrentDensity {
 public:
  CurrentDensity() = default;
  // polynomial_degree < 0 marks a non-polynomial field.
  static CurrentDensity analytic(VectorFunction f, int polynomial_degree = -1);
  static CurrentDensity broken(BrokenVectorField field, VectorFunction source = {});

  bool is_broken() const { return !field_.cells.empty(); }
  bool is_polynomial() const { return is_broken() || degree_ >= 0; }
  // Total degree when polynomial, -1 otherwise.
  int degree() const { return is_broken() ? field_.degree() : degree_; }
  const VectorFunction& function() const { return fn_; }
  const BrokenVectorField& field() const { return field_; }

  Vec3 value(int t, const ElementGeometry& g, const Vec3& xhat) const {
    return is_broken() ? field_.eval(t, xhat) : fn_(g.map(xhat));
  }
  // Quadrature exactness for integrating this field against a polynomial
  // of degree `other`; analytic fields get `other + 4` extra headroom.
  int exactness_against(int other) const;
  // Exactness for squared norms of this field minus a degree `other` field.
  int norm_exactness(int other) const;

 private:
  VectorFunction fn_;
  BrokenVectorField field_;
  int degree_ = -1;
};

// Per-tet Raviart-Thomas interpolant of degree k' of a closed-form current.
// Face moments are computed from the same physical points on both sides,
// so normal components are continuous.
CurrentDensity project_current(const Mesh& mesh, const VectorFunction& j, int degree,
                               const ExecPolicy& exec = {});

// Max over tets of the L2 norm of div j_h and over internal faces of the
// normal-flux jump, both for broken currents.
struct DivergenceReport {
  double max_element_divergence = 0.0;
  double max_flux_jump = 0.0;
};
DivergenceReport divergence_report(const Mesh& mesh, const CurrentDensity& j);

// H_h = mu^{-1} curl u_h per tet (degree k-1) and j_h = curl H_h.
struct DiscreteField {
  BrokenVectorField H;
  BrokenVectorField jh;
};
DiscreteField compute_Hh(const Mesh& mesh, const DofMap& ned, const Eigen::VectorXd& u_full,
                         const MaterialField& mu, const ExecPolicy& exec = {});

// Per-tet covariant field of a global Nedelec coefficient vector.
BrokenVectorField nedelec_field(const Mesh& mesh, const DofMap& ned, const Eigen::VectorXd& u_full);

// Global interpolants of closed-form fields: covariant pullback for the
// Nedelec map, nodal values for the Lagrange map. Full-length vectors.
Eigen::VectorXd interpolate_nedelec(const Mesh& mesh, const DofMap& ned, const VectorFunction& f);
Eigen::VectorXd interpolate_lagrange(const Mesh& mesh, const DofMap& lagrange,
                                     const std::function<double(const Vec3&)>& f);

// Tangential jump n_f x (F+ - F-) at a physical point on internal face f.
Vec3 tangential_jump(const Mesh& mesh, const BrokenVectorField& F, int f, const Vec3& x);

}  // namespace ndeq
