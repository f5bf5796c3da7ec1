// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "internal.hpp"
#include "ndeq/equilibrate.hpp"

namespace ndeq {

using detail::mapped;

double ElementCorrection::max_residual() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, r);
  return m;
}

double ElementCorrection::oscillation(const Mesh& mesh) const {
  constexpr double kPi = 3.14159265358979323846;
  double s = 0.0;
  for (std::size_t t = 0; t < residual.size(); ++t) {
    const double h = mesh.tet_diameter(static_cast<int>(t)) / kPi;
    s += h * h * residual[t] * residual[t];
  }
  return std::sqrt(s);
}

Eigen::VectorXd solve_element_correction(const ElementGeometry& g, int degree,
                                         const std::function<Vec3(const Vec3& xhat)>& target,
                                         int exactness, double* residual) {
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, degree);
  const auto& mono = monomials(3, degree);
  const auto& qr = quadrature(QuadDomain::Tet, detail::clamp_exactness(exactness));
  const int n = R.dim();
  const int m = mono.size() - 1;  // non-constant monomials
  const auto curls = mapped(R.eval_curl(qr.points), g.J / g.det);
  const auto vals = mapped(R.eval(qr.points), g.Jinv.transpose());

  const Eigen::MatrixXd table = mono.table(qr.points);
  BasisTable gref;
  gref.comp.resize(3);
  for (int a = 0; a < 3; ++a) {
    gref.comp[a] = (mono.derivative(a).transpose() * table).bottomRows(m);
  }
  const auto grads = mapped(gref, g.Jinv.transpose());

  const std::size_t nq = qr.size();
  Eigen::VectorXd w(nq);
  std::vector<Vec3> tv(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    w[q] = qr.weights[q] * g.absdet;
    tv[q] = target(qr.points[q]);
  }
  // The multiplier block is rescaled by 1/h so both blocks scale alike.
  const double hinv = 1.0 / std::cbrt(g.absdet);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n + m, n + m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
  for (int c = 0; c < 3; ++c) {
    S.topLeftCorner(n, n) += curls[c] * w.asDiagonal() * curls[c].transpose();
    S.topRightCorner(n, m) += hinv * (vals[c] * w.asDiagonal() * grads[c].transpose());
    Eigen::VectorXd tc(nq);
    for (std::size_t q = 0; q < nq; ++q) tc[q] = tv[q][c] * w[q];
    rhs.head(n) += curls[c] * tc;
  }
  S.bottomLeftCorner(m, n) = S.topRightCorner(n, m).transpose();

  Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
  if (lu.rank() != n + m) {
    throw Error(ErrorCode::LocalSolveSingular,
                "element saddle system has rank " + std::to_string(lu.rank()) + " of " +
                    std::to_string(n + m));
  }
  const Eigen::VectorXd coef = lu.solve(rhs).head(n);
  if (residual) {
    double s = 0.0;
    for (std::size_t q = 0; q < nq; ++q) {
      Vec3 cu;
      for (int c = 0; c < 3; ++c) cu[c] = curls[c].col(q).dot(coef);
      s += w[q] * (cu - tv[q]).squaredNorm();
    }
    *residual = std::sqrt(s);
  }
  return coef;
}

ElementCorrection step1_element_corrections(const Mesh& mesh, const MaterialField& mu,
                                            const CurrentDensity& j, const DiscreteField& Hh,
                                            const EquilibrationOptions& opts) {
  (void)mu;  // mu is constant per tet, so the orthogonality condition does not depend on it
  const int kp = opts.degree;
  if (!Hh.H.cells.empty() && Hh.H.degree() > kp - 1) {
    throw Error(ErrorCode::InvalidArgument, "auxiliary degree must be at least the solution degree");
  }
  if (opts.strict_a2 && !j.is_broken()) {
    throw Error(ErrorCode::DataIncompatible, "strict mode needs a piecewise-polynomial (projected) current");
  }
  const auto& R = reference_space(SpaceKind::Nedelec1_tet, kp);
  const int nm = R.monomials().size();
  const int exactness = j.norm_exactness(kp);
  const std::size_t nt = mesh.num_tets();

  ElementCorrection out;
  out.degree = kp;
  out.coefficients.resize(nt);
  out.H.cells.resize(nt);
  out.residual.assign(nt, 0.0);
  out.data_divergence.assign(nt, -1.0);
  out.current_norm.assign(nt, 0.0);
  std::vector<double> data_norm(nt, 0.0);

  parallel_for(nt, opts.exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    auto target = [&](const Vec3& xhat) { return Vec3(j.value(ti, g, xhat) - Hh.jh.eval(ti, xhat)); };
    double res = 0.0;
    out.coefficients[t] = solve_element_correction(g, kp, target, exactness, &res);
    out.residual[t] = res;

    const Eigen::VectorXd full = R.coefficients() * out.coefficients[t];
    VecPoly p(kp);
    for (int a = 0; a < 3; ++a) p.c.row(a) = full.segment(a * nm, nm).transpose();
    p.c = g.Jinv.transpose() * p.c;
    out.H.cells[t] = std::move(p);

    const auto& qr = quadrature(QuadDomain::Tet, exactness);
    double jn = 0.0, dn = 0.0, jfull = 0.0;
    Eigen::VectorXd div;
    const MonomialBasis* dmono = nullptr;
    if (j.is_broken()) {
      div = physical_divergence(j.field().cells[t], g.Jinv);
      dmono = &monomials(3, j.field().cells[t].degree);
    }
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const double w = qr.weights[q] * g.absdet;
      jn += w * target(qr.points[q]).squaredNorm();
      jfull += w * j.value(ti, g, qr.points[q]).squaredNorm();
      if (dmono) {
        const double d = dmono->eval(qr.points[q]).dot(div);
        dn += w * d * d;
      }
    }
    out.current_norm[t] = std::sqrt(jn);
    data_norm[t] = std::sqrt(jfull);
    if (dmono) out.data_divergence[t] = std::sqrt(dn);
  });

  if (opts.strict_a2) {
    for (std::size_t t = 0; t < nt; ++t) {
      const double h = mesh.tet_diameter(static_cast<int>(t));
      const double tol = opts.osc_tol * std::max(data_norm[t], out.current_norm[t]) / h;
      if (out.data_divergence[t] > tol) {
        throw Error(ErrorCode::DataIncompatible,
                    "div j = " + std::to_string(out.data_divergence[t]) + " on tet " + std::to_string(t));
      }
    }
  }
  return out;
}

}  // namespace ndeq
