// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>
#include <cstdlib>
#include <string>

#include "ndeq/common.hpp"
#include "ndeq/kernels.hpp"

namespace ndeq::kernels {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar: return &scalar_table();
    case Backend::Avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
    case Backend::Neon: return neon_table();
  }
  return nullptr;
}

const KernelTable* initial_table() {
  if (const char* env = std::getenv("NDEQ_KERNELS")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_table();
    if (v == "avx2" && table_for(Backend::Avx2)) return table_for(Backend::Avx2);
    if (v == "neon" && table_for(Backend::Neon)) return table_for(Backend::Neon);
  }
  return table_for(best_available());
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

bool available(Backend b) { return table_for(b) != nullptr; }

Backend best_available() {
  if (available(Backend::Avx2)) return Backend::Avx2;
  if (available(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(Backend b) {
  const KernelTable* t = table_for(b);
  if (!t) throw Error(ErrorCode::InvalidArgument, std::string("kernel backend unavailable: ") + to_string(b));
  current().store(t, std::memory_order_release);
}

}  // namespace ndeq::kernels
