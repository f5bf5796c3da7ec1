// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/common.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ndeq {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConforming: return "NonConforming";
    case ErrorCode::DegenerateTet: return "DegenerateTet";
    case ErrorCode::ClosureOverflow: return "ClosureOverflow";
    case ErrorCode::NotAdjacent: return "NotAdjacent";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::ProjectionSolveFailure: return "ProjectionSolveFailure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::LocalSolveSingular: return "LocalSolveSingular";
    case ErrorCode::DataIncompatible: return "DataIncompatible";
    case ErrorCode::FaceSolveSingular: return "FaceSolveSingular";
    case ErrorCode::FaceIncompatible: return "FaceIncompatible";
    case ErrorCode::InconsistentPatch: return "InconsistentPatch";
    case ErrorCode::OrphanNode: return "OrphanNode";
    case ErrorCode::EquilibriumViolated: return "EquilibriumViolated";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void parallel_for(std::size_t n, const ExecPolicy& exec,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t nthreads =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(exec.threads, 1)), n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  // Static contiguous chunks: the assignment of items to threads is fixed by n
  // and the thread count, never by timing.
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  const std::size_t chunk = (n + nthreads - 1) / nthreads;
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ndeq
