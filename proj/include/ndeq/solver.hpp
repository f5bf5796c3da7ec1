// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "ndeq/assembly.hpp"

namespace ndeq {

enum class SolverBackend { Direct, CG };

struct SolverConfig {
  SolverBackend backend = SolverBackend::Direct;
  double tol = 1e-10;  // relative residual
  int max_iter = 20000;
};

struct SolveReport {
  std::string backend;
  int iterations = 0;  // CG iterations or refinement sweeps
  double relative_residual = 0.0;
  double epsilon = 0.0;  // regularisation weight of the direct backend
};

// r' = r - G q with (G^T G) q = G^T r, so G^T r' = 0.
Eigen::VectorXd gradient_correction(const SparseMatrix& G, const Eigen::VectorXd& rhs);

// Solves the singular curl-curl system A u = rhs for a gradient-free rhs.
// Direct: sparse LDL^T of A + eps M with eps = 1e-10 tr(A)/tr(M) and
// iterative refinement against A. CG: Jacobi-preconditioned CG on A itself.
// Throws NoConvergence when the tolerance is not met.
Eigen::VectorXd solve_magnetostatic(const SparseMatrix& A, const SparseMatrix& M,
                                    const Eigen::VectorXd& rhs, const SolverConfig& cfg,
                                    SolveReport* report = nullptr);

// Plain Jacobi-preconditioned CG on the kernel layer.
int jacobi_cg(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol,
              int max_iter, double* relative_residual = nullptr);

// Matrix Market coordinate export.
void write_matrix_market(const std::string& path, const SparseMatrix& A);

}  // namespace ndeq
