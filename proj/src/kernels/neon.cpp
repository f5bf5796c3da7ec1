// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace ndeq::kernels {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + i), vld1q_f64(y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + i + 2), vld1q_f64(y + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_neon(const double* x, double a, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(x + i), va, vld1q_f64(y + i)));
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

double weighted_dot_neon(const double* x, const double* y, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(x + i), vld1q_f64(w + i)), vld1q_f64(y + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * w[i] * y[i];
  return s;
}

void gram_neon(const double* a, std::size_t na, const double* b, std::size_t nb,
               const double* w, std::size_t len, double* out) {
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      out[i * nb + j] = weighted_dot_neon(a + i * len, b + j * len, w, len);
}

void csr_matvec_neon(std::size_t nrows, const int* row_ptr, const int* col,
                     const double* val, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    float64x2_t acc = vdupq_n_f64(0.0);
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    for (; k + 2 <= end; k += 2) {
      const double xv[2] = {x[col[k]], x[col[k + 1]]};
      acc = vfmaq_f64(acc, vld1q_f64(val + k), vld1q_f64(xv));
    }
    double s = vaddvq_f64(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

constexpr KernelTable kNeon{
    Backend::Neon,     dot_neon,  axpy_neon,       xpay_neon,
    weighted_dot_neon, gram_neon, csr_matvec_neon,
};

}  // namespace

const KernelTable* neon_table() { return &kNeon; }

}  // namespace ndeq::kernels

#else

namespace ndeq::kernels {
const KernelTable* neon_table() { return nullptr; }
}  // namespace ndeq::kernels

#endif
