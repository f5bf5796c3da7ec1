// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Small meshes and a plain solve pipeline for the module tests.

#pragma once

#include <algorithm>
#include <numeric>
#include <random>

#include "ndeq/assembly.hpp"
#include "ndeq/fields.hpp"
#include "ndeq/mesh.hpp"
#include "ndeq/quadrature.hpp"
#include "ndeq/solver.hpp"

namespace ndeq::testing {

inline Mesh two_tet_mesh() {
  return build_mesh({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 1)},
                    {{0, 1, 2, 3}, {1, 2, 3, 4}});
}

// Same geometry with vertex ids shuffled and tets listed in shuffled order.
// new_tet_of[t] gives the position of old tet t.
inline Mesh renumbered(const Mesh& m, unsigned seed, std::vector<int>* new_tet_of = nullptr) {
  std::mt19937 rng(seed);
  std::vector<int> vperm(m.num_vertices());
  std::iota(vperm.begin(), vperm.end(), 0);
  std::shuffle(vperm.begin(), vperm.end(), rng);
  std::vector<int> tperm(m.num_tets());
  std::iota(tperm.begin(), tperm.end(), 0);
  std::shuffle(tperm.begin(), tperm.end(), rng);
  std::vector<Vec3> x(m.num_vertices());
  for (std::size_t v = 0; v < x.size(); ++v) x[vperm[v]] = m.vertex(static_cast<int>(v));
  std::vector<std::array<int, 4>> tets(m.num_tets());
  std::vector<int> tags(m.num_tets());
  for (std::size_t t = 0; t < tets.size(); ++t) {
    std::array<int, 4> tv = m.tet(static_cast<int>(t));
    for (int& v : tv) v = vperm[v];
    tets[tperm[t]] = tv;
    tags[tperm[t]] = m.subdomain_tag(static_cast<int>(t));
  }
  if (new_tet_of) *new_tet_of = tperm;
  return build_mesh(std::move(x), std::move(tets), std::move(tags));
}

struct Solved {
  DofMap ned;
  DofMap lag;
  SparseMatrix A;
  SparseMatrix G;
  Eigen::VectorXd rhs;
  Eigen::VectorXd u;  // free dofs
  DiscreteField Hh;
};

inline Solved solve_problem(const Mesh& mesh, const MaterialField& mu, const CurrentDensity& j, int k,
                            const SolverConfig& cfg = {}) {
  Solved s;
  s.ned = build_dofmap(mesh, SpaceKind::Nedelec1_tet, k, true);
  s.lag = build_dofmap(mesh, SpaceKind::P_scalar_tet, k, true);
  s.A = assemble_curlcurl(mesh, s.ned, mu);
  s.G = discrete_gradient(mesh, s.ned, s.lag);
  s.rhs = gradient_correction(s.G, assemble_rhs(mesh, s.ned, j));
  s.u = solve_magnetostatic(s.A, assemble_mass(mesh, s.ned), s.rhs, cfg);
  s.Hh = compute_Hh(mesh, s.ned, s.ned.expand(s.u), mu);
  return s;
}

// ||F - G||_{L2} summed over tets, both broken fields on the same mesh.
inline double broken_distance(const Mesh& mesh, const BrokenVectorField& F, const BrokenVectorField& G,
                              int exactness) {
  const auto& qr = quadrature(QuadDomain::Tet, std::min(exactness, kMaxQuadratureExactness));
  double s = 0.0;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    for (std::size_t q = 0; q < qr.size(); ++q) {
      s += qr.weights[q] * g.absdet *
           (F.eval(static_cast<int>(t), qr.points[q]) - G.eval(static_cast<int>(t), qr.points[q])).squaredNorm();
    }
  }
  return std::sqrt(s);
}

inline double broken_norm(const Mesh& mesh, const BrokenVectorField& F, int exactness) {
  BrokenVectorField zero;
  zero.cells.assign(F.cells.size(), VecPoly(0));
  return broken_distance(mesh, F, zero, exactness);
}

}  // namespace ndeq::testing
