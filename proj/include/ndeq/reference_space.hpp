// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ndeq/polynomial.hpp"

namespace ndeq {

enum class SpaceKind {
  P_scalar_tet,      // P_k(T)
  Nedelec1_tet,      // R_k(T) = P_{k-1}^3 + x × P_{k-1}^3
  RT_tet,            // D_k(T) = P_{k-1}^3 + x P_{k-1}
  P_scalar_tri,      // P_k(f)
  RTtangential_tri,  // D_k(f): rotated 2D Raviart-Thomas in face coordinates
};

const char* to_string(SpaceKind kind);

// Closed-form dimensions.
int space_dimension(SpaceKind kind, int degree);

// Per-component value tables: comp[c](i, q) is component c of basis i at
// point q.
struct BasisTable {
  std::vector<RowMatrix> comp;
  int num_components() const { return static_cast<int>(comp.size()); }
};

// Degree-of-freedom functionals in quadrature form:
// l_i(u) = sum_q sum_c weights(i, q * ncomp + c) u_c(points[q]).
struct DofFunctionals {
  std::vector<Vec3> points;
  Eigen::MatrixXd weights;
};

// Entity that owns each functional, in the local numbering of mesh.hpp.
struct DofEntity {
  int dim;    // 0 vertex, 1 edge, 2 face, 3 cell
  int local;  // local entity index
};

class ReferenceSpace {
 public:
  ReferenceSpace(SpaceKind kind, int degree);

  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int dim() const { return dim_; }
  int value_dim() const { return ncomp_; }
  int domain_dim() const { return domain_dim_; }
  const MonomialBasis& monomials() const { return *mono_; }

  // Basis functions as monomial coefficients: rows value_dim * nmono
  // (component-major), one column per basis function.
  const Eigen::MatrixXd& coefficients() const { return coef_; }
  // Nedelec1_tet: curl, 3 * nmono rows. P_scalar_tri: surface curl
  // (d/dy, -d/dx), 2 * nmono rows.
  const Eigen::MatrixXd& curl_coefficients() const;
  // P_scalar_*: gradient, domain_dim * nmono rows.
  const Eigen::MatrixXd& grad_coefficients() const;
  // RT_tet, RTtangential_tri: divergence, nmono rows.
  const Eigen::MatrixXd& div_coefficients() const;

  BasisTable eval(const std::vector<Vec3>& points) const;
  BasisTable eval_curl(const std::vector<Vec3>& points) const;
  BasisTable eval_grad(const std::vector<Vec3>& points) const;
  BasisTable eval_div(const std::vector<Vec3>& points) const;

  const DofFunctionals& dofs() const { return dofs_; }
  const std::vector<DofEntity>& dof_entities() const { return entities_; }
  // dofs applied to the basis; the identity up to rounding.
  Eigen::MatrixXd unisolvence_matrix() const;
  // Generator dof matrix before inversion; its condition number measures
  // the conditioning of the construction.
  double generator_condition() const { return gen_cond_; }
  // Dofs of a field given by a callback returning value_dim components.
  Eigen::VectorXd interpolate(const std::function<Eigen::VectorXd(const Vec3&)>& f) const;
  // Dofs of a polynomial given by monomial coefficients (rows as in
  // coefficients(), degree up to the basis degree).
  Eigen::VectorXd dofs_of(const Eigen::VectorXd& coeffs) const;

 private:
  BasisTable table_from(const Eigen::MatrixXd& coef, int ncomp, const std::vector<Vec3>& points) const;

  SpaceKind kind_;
  int degree_, dim_, ncomp_, domain_dim_;
  const MonomialBasis* mono_;
  Eigen::MatrixXd coef_, curl_, grad_, div_;
  DofFunctionals dofs_;
  std::vector<DofEntity> entities_;
  double gen_cond_ = 0.0;
};

// Cached per (kind, degree). Throws UnsupportedDegree outside the
// implemented range (0..4 for scalar spaces, 1..4 otherwise).
const ReferenceSpace& reference_space(SpaceKind kind, int degree);

enum class NodeClass { Vertex, Edge, Face, Interior };

// Lattice nodes of degree k on the reference tet. Barycentric index
// (i0, i1, i2, i3) sums to k, with lambda_0 = 1 - x - y - z and
// lambda_{1,2,3} = x, y, z. Ordered vertices, edges, faces, interior.
struct LagrangeNodeSet {
  int degree = 0;
  std::vector<std::array<int, 4>> index;
  std::vector<Vec3> points;
  std::vector<NodeClass> cls;
  std::size_t size() const { return points.size(); }
};

const LagrangeNodeSet& lagrange_nodes(int degree);

// Physical values of reference fields. Throw SingularJacobian when
// |det J| is negligible; negative determinants are allowed.
Vec3 covariant_map(const Mat3& J, const Vec3& ref);
Vec3 piola_map(const Mat3& J, const Vec3& ref);
// Physical curl of the covariant image of a reference field.
Vec3 covariant_curl_map(const Mat3& J, const Vec3& ref_curl);

}  // namespace ndeq
