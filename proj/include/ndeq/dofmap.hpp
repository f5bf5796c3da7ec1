// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "ndeq/mesh.hpp"
#include "ndeq/reference_space.hpp"

namespace ndeq {

// Global numbering for a conforming or broken space on tets. Entity dofs are
// numbered in the local order of the reference space; because elements use
// the ascending vertex order and affine-invariant functionals, both sides of
// a shared edge or face agree without sign or permutation tables.
class DofMap {
 public:
  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  bool broken() const { return broken_; }
  int local_size() const { return local_size_; }
  std::size_t size() const { return boundary_.size(); }
  std::size_t num_free() const { return num_free_; }

  // Local-to-global map of tet t.
  const int* cell_dofs(int t) const { return &l2g_[static_cast<std::size_t>(t) * local_size_]; }
  bool is_boundary(int g) const { return boundary_[g] != 0; }
  // Index among free dofs, or -1 for constrained ones.
  int free_index(int g) const { return free_[g]; }
  const std::vector<int>& free_to_global() const { return free_to_global_; }

  // Scatter a free-dof vector to a full vector with zeros on constrained dofs.
  Eigen::VectorXd expand(const Eigen::VectorXd& free_values) const;
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;

 private:
  friend DofMap build_dofmap(const Mesh&, SpaceKind, int, bool, bool);
  SpaceKind kind_ = SpaceKind::P_scalar_tet;
  int degree_ = 0;
  bool broken_ = false;
  int local_size_ = 0;
  std::size_t num_free_ = 0;
  std::vector<int> l2g_;
  std::vector<char> boundary_;
  std::vector<int> free_;
  std::vector<int> free_to_global_;
};

// homogeneous_boundary constrains every dof on a boundary vertex, edge or
// face. Broken maps give each tet its own block and no constraints.
DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, int degree, bool homogeneous_boundary,
                    bool broken = false);

}  // namespace ndeq
