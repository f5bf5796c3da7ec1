// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Data-parallel inner loops used by assembly, local solves and the CG
// backend. Every kernel has a scalar reference implementation; SIMD variants
// (AVX2+FMA on x86-64, NEON on AArch64) are picked at runtime and must agree
// with the reference to rounding.

#pragma once

#include <cstddef>

namespace ndeq::kernels {

enum class Backend { Scalar, Avx2, Neon };

const char* to_string(Backend b);

struct KernelTable {
  Backend backend;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = x + a * y
  void (*xpay)(const double* x, double a, double* y, std::size_t n);
  double (*weighted_dot)(const double* x, const double* y, const double* w, std::size_t n);
  // out[i * nb + j] = sum_k a[i * len + k] * w[k] * b[j * len + k]
  void (*gram)(const double* a, std::size_t na, const double* b, std::size_t nb,
               const double* w, std::size_t len, double* out);
  // y = A x for a CSR matrix
  void (*csr_matvec)(std::size_t nrows, const int* row_ptr, const int* col,
                     const double* val, const double* x, double* y);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled for this target.
const KernelTable* avx2_table();
const KernelTable* neon_table();

bool available(Backend b);
Backend best_available();

// Process-wide selection. Initialised from NDEQ_KERNELS (scalar|avx2|neon|auto)
// or the best available backend.
const KernelTable& active();
void select(Backend b);

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void xpay(const double* x, double a, double* y, std::size_t n) {
  active().xpay(x, a, y, n);
}
inline double weighted_dot(const double* x, const double* y, const double* w, std::size_t n) {
  return active().weighted_dot(x, y, w, n);
}
inline void gram(const double* a, std::size_t na, const double* b, std::size_t nb,
                 const double* w, std::size_t len, double* out) {
  active().gram(a, na, b, nb, w, len, out);
}
inline void csr_matvec(std::size_t nrows, const int* row_ptr, const int* col,
                       const double* val, const double* x, double* y) {
  active().csr_matvec(nrows, row_ptr, col, val, x, y);
}

}  // namespace ndeq::kernels
