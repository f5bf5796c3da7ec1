// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace ndeq::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpay_avx2(const double* x, double a, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) y[i] = x[i] + a * y[i];
}

double weighted_dot_avx2(const double* x, const double* y, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xw = _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(w + i));
    acc = _mm256_fmadd_pd(xw, _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i] * w[i] * y[i];
  return s;
}

void gram_avx2(const double* a, std::size_t na, const double* b, std::size_t nb,
               const double* w, std::size_t len, double* out) {
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = a + i * len;
    for (std::size_t j = 0; j < nb; ++j) {
      out[i * nb + j] = weighted_dot_avx2(ai, b + j * len, w, len);
    }
  }
}

void csr_matvec_avx2(std::size_t nrows, const int* row_ptr, const int* col,
                     const double* val, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col + k));
      const __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(val + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += val[k] * x[col[k]];
    y[r] = s;
  }
}

constexpr KernelTable kAvx2{
    Backend::Avx2,     dot_avx2,  axpy_avx2,       xpay_avx2,
    weighted_dot_avx2, gram_avx2, csr_matvec_avx2,
};

}  // namespace

const KernelTable* avx2_table() { return &kAvx2; }

}  // namespace ndeq::kernels

#else

namespace ndeq::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace ndeq::kernels

#endif
