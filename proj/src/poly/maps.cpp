// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "ndeq/reference_space.hpp"

namespace ndeq {

namespace {

double checked_det(const Mat3& J) {
  const double det = J.determinant();
  const double scale = J.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-14 * scale * scale * scale)) {
    throw Error(ErrorCode::SingularJacobian, "Jacobian is singular");
  }
  return det;
}

}  // namespace

Vec3 covariant_map(const Mat3& J, const Vec3& ref) {
  checked_det(J);
  return J.transpose().partialPivLu().solve(ref);
}

Vec3 piola_map(const Mat3& J, const Vec3& ref) { return J * ref / checked_det(J); }

Vec3 covariant_curl_map(const Mat3& J, const Vec3& ref_curl) {
  return J * ref_curl / checked_det(J);
}

}  // namespace ndeq
