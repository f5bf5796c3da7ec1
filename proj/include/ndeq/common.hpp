// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace ndeq {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class ErrorCode {
  NonConforming,
  DegenerateTet,
  ClosureOverflow,
  NotAdjacent,
  UnsupportedDegree,
  WrongKind,
  SingularJacobian,
  ProjectionSolveFailure,
  NoConvergence,
  LocalSolveSingular,
  DataIncompatible,
  FaceSolveSingular,
  FaceIncompatible,
  InconsistentPatch,
  OrphanNode,
  EquilibriumViolated,
  InvalidArgument,
  Io,
};

const char* to_string(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// failure class so callers and tests can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}
  ErrorCode code() const noexcept { return code_; }
  // what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

// Execution policy for element/face/node loops. threads == 1 is the strict
// sequential mode; every parallel loop writes to disjoint slots and all
// reductions run sequentially afterwards, so results never depend on the
// schedule.
struct ExecPolicy {
  int threads = 1;
  static ExecPolicy sequential() { return {}; }
};

void parallel_for(std::size_t n, const ExecPolicy& exec,
                  const std::function<void(std::size_t)>& body);

}  // namespace ndeq
