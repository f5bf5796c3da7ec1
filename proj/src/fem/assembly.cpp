// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/assembly.hpp"

#include <algorithm>
#include <map>

#include "ndeq/kernels.hpp"
#include "ndeq/quadrature.hpp"

namespace ndeq {

namespace {

// Physical values of mapped basis functions at quadrature points:
// out[c](i, q) = sum_a M(c, a) ref[a](i, q).
std::array<RowMatrix, 3> mapped(const BasisTable& ref, const Mat3& M) {
  std::array<RowMatrix, 3> out;
  for (int c = 0; c < 3; ++c) {
    out[c] = M(c, 0) * ref.comp[0] + M(c, 1) * ref.comp[1] + M(c, 2) * ref.comp[2];
  }
  return out;
}

Eigen::MatrixXd weighted_gram(const std::array<RowMatrix, 3>& v, const std::vector<double>& w) {
  const auto n = static_cast<std::size_t>(v[0].rows());
  const auto nq = static_cast<std::size_t>(v[0].cols());
  RowMatrix out = RowMatrix::Zero(n, n);
  RowMatrix part(n, n);
  for (int c = 0; c < 3; ++c) {
    kernels::gram(v[c].data(), n, v[c].data(), n, w.data(), nq, part.data());
    out += part;
  }
  return out;
}

SparseMatrix scatter(const Mesh& mesh, const DofMap& dm, const std::vector<Eigen::MatrixXd>& local) {
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(local.size() * dm.local_size() * dm.local_size());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const int* l2g = dm.cell_dofs(static_cast<int>(t));
    for (int i = 0; i < dm.local_size(); ++i) {
      const int fi = dm.free_index(l2g[i]);
      if (fi < 0) continue;
      for (int j = 0; j < dm.local_size(); ++j) {
        const int fj = dm.free_index(l2g[j]);
        if (fj < 0) continue;
        trip.emplace_back(fi, fj, local[t](i, j));
      }
    }
  }
  SparseMatrix A(dm.num_free(), dm.num_free());
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

Eigen::MatrixXd element_curlcurl(const ElementGeometry& g, int degree, double mu) {
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, degree);
  const auto& qr = quadrature(QuadDomain::Tet, 2 * (degree - 1));
  const auto curls = mapped(R.eval_curl(qr.points), g.J / g.det);
  std::vector<double> w(qr.weights);
  for (auto& x : w) x *= g.absdet / mu;
  return weighted_gram(curls, w);
}

Eigen::MatrixXd element_mass(const ElementGeometry& g, int degree) {
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, degree);
  const auto& qr = quadrature(QuadDomain::Tet, 2 * degree);
  const auto vals = mapped(R.eval(qr.points), g.Jinv.transpose());
  std::vector<double> w(qr.weights);
  for (auto& x : w) x *= g.absdet;
  return weighted_gram(vals, w);
}

SparseMatrix assemble_curlcurl(const Mesh& mesh, const DofMap& ned, const MaterialField& mu,
                               const ExecPolicy& exec) {
  std::vector<Eigen::MatrixXd> local(mesh.num_tets());
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    local[t] = element_curlcurl(element_geometry(mesh, ti), ned.degree(), mu.mu_on(mesh, ti));
  });
  return scatter(mesh, ned, local);
}

SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& ned, const ExecPolicy& exec) {
  std::vector<Eigen::MatrixXd> local(mesh.num_tets());
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    local[t] = element_mass(element_geometry(mesh, static_cast<int>(t)), ned.degree());
  });
  return scatter(mesh, ned, local);
}

Eigen::VectorXd assemble_rhs(const Mesh& mesh, const DofMap& ned, const CurrentDensity& j,
                             const ExecPolicy& exec, int exactness) {
  const int k = ned.degree();
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, k);
  const auto& qr = quadrature(QuadDomain::Tet, exactness >= 0 ? exactness : j.exactness_against(k));
  const BasisTable ref = R.eval(qr.points);
  std::vector<Eigen::VectorXd> local(mesh.num_tets());
  parallel_for(mesh.num_tets(), exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    const auto vals = mapped(ref, g.Jinv.transpose());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(R.dim());
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const Vec3 jv = j.value(ti, g, qr.points[q]) * (qr.weights[q] * g.absdet);
      for (int c = 0; c < 3; ++c) b += jv[c] * vals[c].col(q);
    }
    local[t] = std::move(b);
  });
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ned.num_free());
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const int* l2g = ned.cell_dofs(static_cast<int>(t));
    for (int i = 0; i < ned.local_size(); ++i) {
      const int fi = ned.free_index(l2g[i]);
      if (fi >= 0) rhs[fi] += local[t][i];
    }
  }
  return rhs;
}

SparseMatrix discrete_gradient(const Mesh& mesh, const DofMap& ned, const DofMap& lagrange) {
  if (ned.kind() != SpaceKind::Nedelec1_tet || lagrange.kind() != SpaceKind::P_scalar_tet) {
    throw Error(ErrorCode::WrongKind, "discrete_gradient needs Nedelec and Lagrange maps");
  }
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, ned.degree());
  const auto& P = reference_space(SpaceKind::P_scalar_tet, lagrange.degree());
  // The dofs are affine invariant, so the local matrix is the same on
  // every tet and shared entries agree; entries are set, not summed.
  Eigen::MatrixXd Gloc(R.dim(), P.dim());
  for (int j = 0; j < P.dim(); ++j) Gloc.col(j) = R.dofs_of(P.grad_coefficients().col(j));
  std::map<std::pair<int, int>, double> entries;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const int* rg = ned.cell_dofs(static_cast<int>(t));
    const int* pg = lagrange.cell_dofs(static_cast<int>(t));
    for (int i = 0; i < R.dim(); ++i) {
      const int fi = ned.free_index(rg[i]);
      if (fi < 0) continue;
      for (int j = 0; j < P.dim(); ++j) {
        const int fj = lagrange.free_index(pg[j]);
        if (fj < 0 || std::abs(Gloc(i, j)) < 1e-13) continue;
        entries.emplace(std::make_pair(fi, fj), Gloc(i, j));
      }
    }
  }
  std::vector<Eigen::Triplet<double, int>> trip;
  trip.reserve(entries.size());
  for (const auto& [ij, v] : entries) trip.emplace_back(ij.first, ij.second, v);
  SparseMatrix G(ned.num_free(), lagrange.num_free());
  G.setFromTriplets(trip.begin(), trip.end());
  G.makeCompressed();
  return G;
}

}  // namespace ndeq
