// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/dofmap.hpp"

#include <array>

namespace ndeq {

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, int degree, bool homogeneous_boundary,
                    bool broken) {
  if (kind == SpaceKind::P_scalar_tri || kind == SpaceKind::RTtangential_tri) {
    throw Error(ErrorCode::WrongKind, "dof maps are built for tet spaces only");
  }
  const auto& space = reference_space(kind, degree);
  DofMap m;
  m.kind_ = kind;
  m.degree_ = degree;
  m.broken_ = broken;
  m.local_size_ = space.dim();
  const std::size_t nt = mesh.num_tets();
  m.l2g_.resize(nt * space.dim());

  if (broken) {
    for (std::size_t i = 0; i < m.l2g_.size(); ++i) m.l2g_[i] = static_cast<int>(i);
    m.boundary_.assign(m.l2g_.size(), 0);
  } else {
    // Dofs per entity type and position of each local dof within its entity.
    const auto& ents = space.dof_entities();
    std::array<int, 4> per{0, 0, 0, 0};
    std::vector<int> pos(ents.size());
    {
      std::array<std::vector<int>, 4> seen;
      for (auto& s : seen) s.assign(6, 0);
      for (std::size_t i = 0; i < ents.size(); ++i) pos[i] = seen[ents[i].dim][ents[i].local]++;
      for (int d = 0; d < 4; ++d) per[d] = seen[d][0];
    }
    const std::array<std::size_t, 4> counts{mesh.num_vertices(), mesh.num_edges(), mesh.num_faces(), nt};
    std::array<std::size_t, 4> offset{};
    std::size_t total = 0;
    for (int d = 0; d < 4; ++d) {
      offset[d] = total;
      total += counts[d] * per[d];
    }
    m.boundary_.assign(total, 0);
    for (std::size_t t = 0; t < nt; ++t) {
      const int ti = static_cast<int>(t);
      for (std::size_t i = 0; i < ents.size(); ++i) {
        const auto& e = ents[i];
        int id = 0;
        bool on_boundary = false;
        switch (e.dim) {
          case 0:
            id = mesh.sorted_tet(ti)[e.local];
            on_boundary = mesh.vertex_on_boundary(id);
            break;
          case 1:
            id = mesh.tet_edges(ti)[e.local];
            on_boundary = mesh.edge(id).on_boundary;
            break;
          case 2:
            id = mesh.tet_faces(ti)[e.local];
            on_boundary = mesh.face(id).is_boundary();
            break;
          default:
            id = ti;
        }
        const std::size_t g = offset[e.dim] + static_cast<std::size_t>(id) * per[e.dim] + pos[i];
        m.l2g_[t * ents.size() + i] = static_cast<int>(g);
        if (homogeneous_boundary && on_boundary) m.boundary_[g] = 1;
      }
    }
  }
  m.free_.assign(m.boundary_.size(), -1);
  for (std::size_t g = 0; g < m.boundary_.size(); ++g) {
    if (!m.boundary_[g]) {
      m.free_[g] = static_cast<int>(m.free_to_global_.size());
      m.free_to_global_.push_back(static_cast<int>(g));
    }
  }
  m.num_free_ = m.free_to_global_.size();
  return m;
}

Eigen::VectorXd DofMap::expand(const Eigen::VectorXd& free_values) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(size());
  for (std::size_t i = 0; i < free_to_global_.size(); ++i) full[free_to_global_[i]] = free_values[i];
  return full;
}

Eigen::VectorXd DofMap::restrict(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(free_to_global_.size());
  for (std::size_t i = 0; i < free_to_global_.size(); ++i) out[i] = full[free_to_global_[i]];
  return out;
}

}  // namespace ndeq
