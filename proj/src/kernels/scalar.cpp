// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/kernels.hpp"

namespace ndeq::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpay_scalar(const double* x, double a, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + a * y[i];
}

double weighted_dot_scalar(const double* x, const double* y, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * w[i] * y[i];
  return s;
}

void gram_scalar(const double* a, std::size_t na, const double* b, std::size_t nb,
                 const double* w, std::size_t len, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = a + i * len;
    for (std::size_t j = 0; j < nb; ++j) {
      out[i * nb + j] = weighted_dot_scalar(ai, b + j * len, w, len);
    }
  }
}

void csr_matvec_scalar(std::size_t nrows, const int* row_ptr, const int* col,
                       const double* val, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

constexpr KernelTable kScalar{
    Backend::Scalar, dot_scalar,  axpy_scalar,       xpay_scalar,
    weighted_dot_scalar, gram_scalar, csr_matvec_scalar,
};

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

}  // namespace ndeq::kernels
