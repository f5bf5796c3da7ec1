// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ndeq/common.hpp"
#include "ndeq/kernels.hpp"

using namespace ndeq;
namespace k = ndeq::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<const k::KernelTable*> variants() {
  std::vector<const k::KernelTable*> out;
  if (k::available(k::Backend::Avx2)) out.push_back(k::avx2_table());
  if (k::available(k::Backend::Neon)) out.push_back(k::neon_table());
  return out;
}

double tol_for(std::size_t n, double mag) { return 1e-14 * (n + 1) * mag; }

}  // namespace

TEST_CASE("scalar backend is always available") {
  CHECK(k::available(k::Backend::Scalar));
  CHECK(k::scalar_table().backend == k::Backend::Scalar);
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  std::mt19937_64 rng(7);
  const auto& ref = k::scalar_table();
  for (const auto* simd : variants()) {
    CAPTURE(k::to_string(simd->backend));
    for (std::size_t n : {0, 1, 3, 4, 5, 7, 8, 9, 16, 31, 100, 1001}) {
      const auto x = random_vector(rng, n), y = random_vector(rng, n), w = random_vector(rng, n);
      CHECK(std::abs(simd->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <= tol_for(n, 1));
      CHECK(std::abs(simd->weighted_dot(x.data(), y.data(), w.data(), n) -
                     ref.weighted_dot(x.data(), y.data(), w.data(), n)) <= tol_for(n, 1));
      auto y1 = y, y2 = y;
      simd->axpy(0.37, x.data(), y1.data(), n);
      ref.axpy(0.37, x.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15);
      y1 = y;
      y2 = y;
      simd->xpay(x.data(), -1.3, y1.data(), n);
      ref.xpay(x.data(), -1.3, y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-15);
    }
    for (std::size_t len : {1, 5, 8, 27, 64}) {
      const std::size_t na = 7, nb = 5;
      const auto a = random_vector(rng, na * len), b = random_vector(rng, nb * len);
      const auto w = random_vector(rng, len);
      std::vector<double> o1(na * nb), o2(na * nb);
      simd->gram(a.data(), na, b.data(), nb, w.data(), len, o1.data());
      ref.gram(a.data(), na, b.data(), nb, w.data(), len, o2.data());
      for (std::size_t i = 0; i < o1.size(); ++i) CHECK(std::abs(o1[i] - o2[i]) <= tol_for(len, 1));
    }
    // Random CSR matrix with ragged rows.
    const std::size_t rows = 50, cols = 40;
    std::vector<int> ptr{0}, col;
    std::vector<double> val;
    std::uniform_int_distribution<int> len_d(0, 13), col_d(0, cols - 1);
    for (std::size_t r = 0; r < rows; ++r) {
      const int l = len_d(rng);
      for (int j = 0; j < l; ++j) {
        col.push_back(col_d(rng));
        val.push_back(random_vector(rng, 1)[0]);
      }
      ptr.push_back(static_cast<int>(col.size()));
    }
    const auto x = random_vector(rng, cols);
    std::vector<double> y1(rows), y2(rows);
    simd->csr_matvec(rows, ptr.data(), col.data(), val.data(), x.data(), y1.data());
    ref.csr_matvec(rows, ptr.data(), col.data(), val.data(), x.data(), y2.data());
    for (std::size_t r = 0; r < rows; ++r) CHECK(std::abs(y1[r] - y2[r]) <= 1e-13);
  }
}

TEST_CASE("backend selection round-trips") {
  const auto before = k::active().backend;
  k::select(k::Backend::Scalar);
  CHECK(k::active().backend == k::Backend::Scalar);
  k::select(k::best_available());
  CHECK(k::active().backend == k::best_available());
  k::select(before);
  if (!k::available(k::Backend::Neon)) {
    CHECK_THROWS_AS(k::select(k::Backend::Neon), Error);
  }
}
