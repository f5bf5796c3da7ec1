// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Sparse>

#include "ndeq/fields.hpp"

namespace ndeq {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// All global matrices and vectors below live on the free dofs of their maps.

// (mu^{-1} curl u, curl w) on a Nedelec map.
SparseMatrix assemble_curlcurl(const Mesh& mesh, const DofMap& ned, const MaterialField& mu,
                               const ExecPolicy& exec = {});
// (u, w) on a Nedelec map.
SparseMatrix assemble_mass(const Mesh& mesh, const DofMap& ned, const ExecPolicy& exec = {});
// (j, w) on a Nedelec map. `exactness` < 0 picks the default for j.
Eigen::VectorXd assemble_rhs(const Mesh& mesh, const DofMap& ned, const CurrentDensity& j,
                             const ExecPolicy& exec = {}, int exactness = -1);
// Coefficients of grad psi in the Nedelec space for psi in the Lagrange
// space of the same degree; rows are free Nedelec dofs, columns free
// Lagrange dofs.
SparseMatrix discrete_gradient(const Mesh& mesh, const DofMap& ned, const DofMap& lagrange);

// Reference element matrices for one tet, exposed for tests.
Eigen::MatrixXd element_curlcurl(const ElementGeometry& g, int degree, double mu);
Eigen::MatrixXd element_mass(const ElementGeometry& g, int degree);

}  // namespace ndeq
