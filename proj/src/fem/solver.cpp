// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/solver.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>

#include "ndeq/kernels.hpp"

namespace ndeq {

namespace {

void matvec(const SparseMatrix& A, const Eigen::VectorXd& x, Eigen::VectorXd& y) {
  y.resize(A.rows());
  kernels::csr_matvec(static_cast<std::size_t>(A.rows()), A.outerIndexPtr(), A.innerIndexPtr(),
                      A.valuePtr(), x.data(), y.data());
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// b - A x accumulated in long double; refinement stalls at the rounding
// floor of the residual otherwise.
Eigen::VectorXd extended_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  Eigen::VectorXd r(A.rows());
  for (int i = 0; i < A.rows(); ++i) {
    long double s = b[i];
    for (int p = A.outerIndexPtr()[i]; p < A.outerIndexPtr()[i + 1]; ++p) {
      s -= static_cast<long double>(A.valuePtr()[p]) * x[A.innerIndexPtr()[p]];
    }
    r[i] = static_cast<double>(s);
  }
  return r;
}

double trace(const SparseMatrix& A) {
  double s = 0.0;
  for (int i = 0; i < A.rows(); ++i) s += A.coeff(i, i);
  return s;
}

}  // namespace

Eigen::VectorXd gradient_correction(const SparseMatrix& G, const Eigen::VectorXd& rhs) {
  if (G.cols() == 0) return rhs;
  const SparseMatrix GtG = G.transpose() * G;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(Eigen::SparseMatrix<double>(GtG));
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorCode::ProjectionSolveFailure, "G^T G factorisation failed");
  }
  Eigen::VectorXd r = rhs;
  // Two sweeps remove the rounding left by the first projection.
  for (int sweep = 0; sweep < 2; ++sweep) {
    const Eigen::VectorXd q = ldlt.solve(G.transpose() * r);
    if (ldlt.info() != Eigen::Success || !q.allFinite()) {
      throw Error(ErrorCode::ProjectionSolveFailure, "G^T G solve failed");
    }
    r -= G * q;
  }
  return r;
}

int jacobi_cg(const SparseMatrix& A, const Eigen::VectorXd& b, Eigen::VectorXd& x, double tol,
              int max_iter, double* relative_residual) {
  const std::size_t n = static_cast<std::size_t>(A.rows());
  if (x.size() != static_cast<Eigen::Index>(n)) x = Eigen::VectorXd::Zero(n);
  const double bnorm = std::sqrt(kernels::dot(b.data(), b.data(), n));
  if (bnorm == 0.0) {
    x.setZero();
    if (relative_residual) *relative_residual = 0.0;
    return 0;
  }
  Eigen::VectorXd inv_diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = A.coeff(static_cast<int>(i), static_cast<int>(i));
    inv_diag[i] = d > 0.0 ? 1.0 / d : 1.0;
  }
  Eigen::VectorXd r, Ap, z(n), p(n);
  matvec(A, x, Ap);
  r = b - Ap;
  z = inv_diag.cwiseProduct(r);
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n);
  int it = 0;
  double rel = std::sqrt(kernels::dot(r.data(), r.data(), n)) / bnorm;
  while (rel > tol && it < max_iter) {
    matvec(A, p, Ap);
    const double pAp = kernels::dot(p.data(), Ap.data(), n);
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, Ap.data(), r.data(), n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = kernels::dot(r.data(), z.data(), n);
    kernels::xpay(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
    ++it;
    rel = std::sqrt(kernels::dot(r.data(), r.data(), n)) / bnorm;
  }
  // Report the true residual rather than the recursively updated one.
  matvec(A, x, Ap);
  rel = (b - Ap).norm() / bnorm;
  if (relative_residual) *relative_residual = rel;
  return it;
}

Eigen::VectorXd solve_magnetostatic(const SparseMatrix& A, const SparseMatrix& M,
                                    const Eigen::VectorXd& rhs, const SolverConfig& cfg,
                                    SolveReport* report) {
  const Eigen::Index n = A.rows();
  SolveReport rep;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  const double bnorm = rhs.norm();
  if (n == 0 || bnorm == 0.0) {
    rep.backend = cfg.backend == SolverBackend::CG ? "cg" : "direct";
    if (report) *report = rep;
    return u;
  }
  if (cfg.backend == SolverBackend::CG) {
    rep.backend = "cg";
    rep.iterations = jacobi_cg(A, rhs, u, cfg.tol, cfg.max_iter, &rep.relative_residual);
  } else {
    rep.backend = "direct";
    rep.epsilon = 1e-10 * trace(A) / trace(M);
    const Eigen::SparseMatrix<double> K = Eigen::SparseMatrix<double>(A) + rep.epsilon * Eigen::SparseMatrix<double>(M);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "factorisation failed");
    Eigen::VectorXd r = rhs;
    for (int sweep = 0; sweep < 20; ++sweep) {
      u += ldlt.solve(r);
      r = extended_residual(A, u, rhs);
      rep.iterations = sweep + 1;
      rep.relative_residual = r.norm() / bnorm;
      if (rep.relative_residual <= cfg.tol) break;
    }
  }
  if (report) *report = rep;
  if (!(rep.relative_residual <= cfg.tol)) {
    throw Error(ErrorCode::NoConvergence, rep.backend + " solve stopped at relative residual " +
                                              sci(rep.relative_residual));
  }
  return u;
}

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n' << std::setprecision(17);
  for (int r = 0; r < A.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace ndeq
