// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>

#include "internal.hpp"
#include "ndeq/equilibrate.hpp"

namespace ndeq {

Eigen::VectorXd solve_node_patch(int m, const std::vector<PatchEquation>& eqs, double* residual) {
  const int rows = static_cast<int>(eqs.size()) + 1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  for (std::size_t r = 0; r < eqs.size(); ++r) {
    A(static_cast<int>(r), eqs[r].plus) += 1.0;
    A(static_cast<int>(r), eqs[r].minus) -= 1.0;
    b[static_cast<int>(r)] = eqs[r].value;
  }
  A.row(rows - 1).setOnes();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() != m) {
    throw Error(ErrorCode::OrphanNode, "node patch is not connected through internal faces");
  }
  Eigen::VectorXd x = qr.solve(b);
  if (residual) *residual = (A * x - b).cwiseAbs().maxCoeff();
  return x;
}

namespace {

// Monomial coefficients from values at lagrange_nodes(k).
Eigen::MatrixXd nodal_to_monomial(int k) {
  const auto& nodes = lagrange_nodes(k);
  const Eigen::MatrixXd V = monomials(3, k).table(nodes.points).transpose();
  return V.inverse();
}

}  // namespace

BrokenVectorField NodalPotential::gradient(const Mesh& mesh) const {
  BrokenVectorField out;
  out.cells.resize(coefficients.size());
  for (std::size_t t = 0; t < coefficients.size(); ++t) {
    const auto g = element_geometry(mesh, static_cast<int>(t));
    out.cells[t] = physical_gradient(coefficients[t], degree, g.Jinv);
  }
  return out;
}

NodalPotential step3_reconstruct_phi(const Mesh& mesh, const FaceMultiplier& lambdas,
                                     const EquilibrationOptions& opts) {
  const int k = opts.degree;
  const auto& lattice = lagrange_nodes(k);
  const std::size_t nt = mesh.num_tets();
  NodalPotential out;
  out.degree = k;

  // Registry: a node is identified by its support vertices and their lattice
  // counts, which every tet containing it reproduces exactly.
  std::map<std::vector<std::pair<int, int>>, int> registry;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& sv = mesh.sorted_tet(static_cast<int>(t));
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      std::vector<std::pair<int, int>> key;
      for (int a = 0; a < 4; ++a) {
        if (lattice.index[i][a] > 0) key.emplace_back(sv[a], lattice.index[i][a]);
      }
      std::sort(key.begin(), key.end());
      auto [it, inserted] = registry.emplace(key, static_cast<int>(out.nodes.size()));
      if (inserted) out.nodes.push_back({key, {}});
      out.nodes[it->second].members.emplace_back(static_cast<int>(t), static_cast<int>(i));
    }
  }

  out.values.assign(nt, Eigen::VectorXd::Zero(static_cast<int>(lattice.size())));
  std::vector<double> residual(out.nodes.size(), 0.0);
  std::vector<char> fast(out.nodes.size(), 0);
  parallel_for(out.nodes.size(), opts.exec, [&](std::size_t n) {
    const auto& node = out.nodes[n];
    const int m = static_cast<int>(node.members.size());
    if (m == 1) {
      fast[n] = 1;
      return;  // interior or single-tet patch: phi = 0
    }
    std::vector<std::pair<int, double>> bary;
    for (const auto& [v, c] : node.key) bary.emplace_back(v, static_cast<double>(c) / k);
    auto local_of = [&](int t) {
      for (int i = 0; i < m; ++i) {
        if (node.members[i].first == t) return i;
      }
      return -1;
    };
    // Internal faces whose closure contains the node.
    std::vector<int> faces;
    for (const auto& [t, li] : node.members) {
      for (int f : mesh.tet_faces(t)) {
        const Face& face = mesh.face(f);
        if (face.is_boundary()) continue;
        bool contains = true;
        for (const auto& kv : node.key) {
          contains = contains && std::find(face.v.begin(), face.v.end(), kv.first) != face.v.end();
        }
        if (contains && std::find(faces.begin(), faces.end(), f) == faces.end()) faces.push_back(f);
      }
    }
    std::vector<PatchEquation> eqs;
    for (int f : faces) {
      const Face& face = mesh.face(f);
      const int a = local_of(face.plus), b = local_of(face.minus);
      if (a < 0 || b < 0) {
        throw Error(ErrorCode::OrphanNode, "face " + std::to_string(f) + " misses a registry member");
      }
      eqs.push_back({a, b, lambdas.eval_barycentric(mesh, lambdas.slot_of_face[f], bary)});
    }
    Eigen::VectorXd phi;
    if (m == 2 && eqs.size() == 1) {
      fast[n] = 1;
      phi = Eigen::VectorXd::Zero(2);
      phi[eqs[0].plus] = 0.5 * eqs[0].value;
      phi[eqs[0].minus] = -0.5 * eqs[0].value;
    } else {
      phi = solve_node_patch(m, eqs, &residual[n]);
    }
    for (int i = 0; i < m; ++i) out.values[node.members[i].first][node.members[i].second] = phi[i];
  });

  for (std::size_t n = 0; n < out.nodes.size(); ++n) {
    out.max_patch_residual = std::max(out.max_patch_residual, residual[n]);
    if (fast[n]) ++out.fast_path_nodes;
    else ++out.least_squares_nodes;
  }
  if (opts.strict_a2) {
    const double scale = lambdas.max_abs();
    if (out.max_patch_residual > opts.lsq_tol * scale) {
      throw Error(ErrorCode::InconsistentPatch,
                  "node patch residual " + std::to_string(out.max_patch_residual) +
                      " against max |lambda| " + std::to_string(scale));
    }
  }

  const Eigen::MatrixXd Vinv = nodal_to_monomial(k);
  out.coefficients.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) out.coefficients[t] = Vinv * out.values[t];
  return out;
}

}  // namespace ndeq
