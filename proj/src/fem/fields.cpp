// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/fields.hpp"

#include <algorithm>
#include <cmath>

#include "ndeq/quadrature.hpp"

namespace ndeq {

void MaterialField::check(double v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "permeability must be positive");
}

MaterialField::MaterialField(std::map<int, double> by_tag, double fallback)
    : by_tag_(std::move(by_tag)), fallback_(fallback) {
  check(fallback_);
  for (const auto& [tag, v] : by_tag_) check(v);
}

double MaterialField::mu(int tag) const {
  auto it = by_tag_.find(tag);
  return it == by_tag_.end() ? fallback_ : it->second;
}

double MaterialField::mu_min() const {
  double m = fallback_;
  for (const auto& [tag, v] : by_tag_) m = std::min(m, v);
  return m;
}

double MaterialField::mu_max() const {
  double m = fallback_;
  for (const auto& [tag, v] : by_tag_) m = std::max(m, v);
  return m;
}

CurrentDensity CurrentDensity::analytic(VectorFunction f, int polynomial_degree) {
  CurrentDensity j;
  j.fn_ = std::move(f);
  j.degree_ = polynomial_degree;
  return j;
}

CurrentDensity CurrentDensity::broken(BrokenVectorField field, VectorFunction source) {
  CurrentDensity j;
  j.field_ = std::move(field);
  j.fn_ = std::move(source);
  return j;
}

int CurrentDensity::exactness_against(int other) const {
  const int e = is_polynomial() ? degree() + other : 2 * other + 4;
  return std::min(e, kMaxQuadratureExactness);
}

int CurrentDensity::norm_exactness(int other) const {
  const int e = is_polynomial() ? 2 * std::max(degree(), other) : 2 * other + 4;
  return std::min(e, kMaxQuadratureExactness);
}

CurrentDensity project_current(const Mesh& mesh, const VectorFunction& j, int degree,
                               const ExecPolicy& exec) {
  const auto& rt = reference_space(SpaceKind::RT_tet, degree);
  const int nm = rt.monomials().size();
  BrokenVectorField field;
  field.cells.resize(mesh.num_tets());
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    // Inverse Piola: jhat = det J^{-1} j.
    const Eigen::VectorXd dofs = rt.interpolate([&](const Vec3& xhat) {
      const Vec3 v = g.det * (g.Jinv * j(g.map(xhat)));
      return Eigen::VectorXd(v);
    });
    const Eigen::VectorXd c = rt.coefficients() * dofs;
    Eigen::Matrix<double, 3, Eigen::Dynamic> ref(3, nm);
    for (int a = 0; a < 3; ++a) ref.row(a) = c.segment(a * nm, nm).transpose();
    VecPoly p(degree);
    p.c = (g.J / g.det) * ref;
    field.cells[t] = std::move(p);
  });
  return CurrentDensity::broken(std::move(field), j);
}

DivergenceReport divergence_report(const Mesh& mesh, const CurrentDensity& j) {
  DivergenceReport r;
  if (!j.is_broken()) return r;
  const auto& F = j.field();
  const int deg = F.degree();
  const auto& qt = quadrature(QuadDomain::Tet, 2 * deg);
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    const Eigen::VectorXd div = physical_divergence(F.cells[t], g.Jinv);
    const auto& mb = monomials(3, F.cells[t].degree);
    double s = 0.0;
    for (std::size_t q = 0; q < qt.size(); ++q) {
      const double v = div.dot(mb.eval(qt.points[q]));
      s += qt.weights[q] * g.absdet * v * v;
    }
    r.max_element_divergence = std::max(r.max_element_divergence, std::sqrt(s));
  }
  const auto& qf = quadrature(QuadDomain::Triangle, 2 * deg);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(static_cast<int>(f));
    if (face.is_boundary()) continue;
    const auto gp = element_geometry(mesh, face.plus);
    const auto gm = element_geometry(mesh, face.minus);
    const Vec3 a = mesh.vertex(face.v[0]);
    const Vec3 t1 = mesh.vertex(face.v[1]) - a, t2 = mesh.vertex(face.v[2]) - a;
    double s = 0.0;
    for (std::size_t q = 0; q < qf.size(); ++q) {
      const Vec3 x = a + qf.points[q].x() * t1 + qf.points[q].y() * t2;
      const double jump = (F.eval(face.plus, gp.to_reference(x)) - F.eval(face.minus, gm.to_reference(x))).dot(face.normal);
      s += qf.weights[q] * 2.0 * face.area * jump * jump;
    }
    r.max_flux_jump = std::max(r.max_flux_jump, std::sqrt(s));
  }
  return r;
}

namespace {

Eigen::Matrix<double, 3, Eigen::Dynamic> as_rows(const Eigen::VectorXd& c, int nm) {
  Eigen::Matrix<double, 3, Eigen::Dynamic> m(3, nm);
  for (int a = 0; a < 3; ++a) m.row(a) = c.segment(a * nm, nm).transpose();
  return m;
}

Eigen::VectorXd gather(const DofMap& dm, int t, const Eigen::VectorXd& full) {
  Eigen::VectorXd loc(dm.local_size());
  const int* l2g = dm.cell_dofs(t);
  for (int i = 0; i < dm.local_size(); ++i) loc[i] = full[l2g[i]];
  return loc;
}

VecPoly truncated(const VecPoly& p, int degree) {
  VecPoly out(std::max(degree, 0));
  if (degree < 0) return out;
  out.c = p.c.leftCols(MonomialBasis::count(3, degree));
  return out;
}

}  // namespace

DiscreteField compute_Hh(const Mesh& mesh, const DofMap& ned, const Eigen::VectorXd& u_full,
                         const MaterialField& mu, const ExecPolicy& exec) {
  const int k = ned.degree();
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, k);
  const int nm = R.monomials().size();
  DiscreteField out;
  out.H.cells.resize(mesh.num_tets());
  out.jh.cells.resize(mesh.num_tets());
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    const Eigen::VectorXd c = R.curl_coefficients() * gather(ned, ti, u_full);
    VecPoly h(k);
    h.c = (g.J / (g.det * mu.mu(mesh.subdomain_tag(ti)))) * as_rows(c, nm);
    out.H.cells[t] = truncated(h, k - 1);
    out.jh.cells[t] = truncated(physical_curl(out.H.cells[t], g.Jinv), std::max(k - 2, 0));
  });
  return out;
}

BrokenVectorField nedelec_field(const Mesh& mesh, const DofMap& ned, const Eigen::VectorXd& u_full) {
  const int k = ned.degree();
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, k);
  const int nm = R.monomials().size();
  BrokenVectorField out;
  out.cells.resize(mesh.num_tets());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    VecPoly p(k);
    p.c = g.Jinv.transpose() * as_rows(R.coefficients() * gather(ned, ti, u_full), nm);
    out.cells[t] = std::move(p);
  }
  return out;
}

Eigen::VectorXd interpolate_nedelec(const Mesh& mesh, const DofMap& ned, const VectorFunction& f) {
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, ned.degree());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ned.size());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    const Eigen::VectorXd loc = R.interpolate([&](const Vec3& xhat) {
      return Eigen::VectorXd(g.J.transpose() * f(g.map(xhat)));
    });
    const int* l2g = ned.cell_dofs(static_cast<int>(t));
    for (int i = 0; i < R.dim(); ++i) out[l2g[i]] = ned.is_boundary(l2g[i]) ? 0.0 : loc[i];
  }
  return out;
}

Eigen::VectorXd interpolate_lagrange(const Mesh& mesh, const DofMap& lagrange,
                                     const std::function<double(const Vec3&)>& f) {
  const auto& P = reference_space(SpaceKind::P_scalar_tet, lagrange.degree());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(lagrange.size());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    const Eigen::VectorXd loc = P.interpolate([&](const Vec3& xhat) {
      return Eigen::VectorXd::Constant(1, f(g.map(xhat)));
    });
    const int* l2g = lagrange.cell_dofs(static_cast<int>(t));
    for (int i = 0; i < P.dim(); ++i) out[l2g[i]] = lagrange.is_boundary(l2g[i]) ? 0.0 : loc[i];
  }
  return out;
}

Vec3 tangential_jump(const Mesh& mesh, const BrokenVectorField& F, int f, const Vec3& x) {
  const Face& face = mesh.face(f);
  const auto gp = element_geometry(mesh, face.plus);
  const auto gm = element_geometry(mesh, face.minus);
  const Vec3 d = F.eval(face.plus, gp.to_reference(x)) - F.eval(face.minus, gm.to_reference(x));
  return face.normal.cross(d);
}

}  // namespace ndeq
