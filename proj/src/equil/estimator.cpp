// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <random>

#include "internal.hpp"
#include "ndeq/dofmap.hpp"
#include "ndeq/equilibrate.hpp"

namespace ndeq {

EstimatorResult step4_estimator(const Mesh& mesh, const MaterialField& mu,
                                const ElementCorrection& correction, const NodalPotential& phi,
                                const ExecPolicy& exec) {
  const std::size_t nt = mesh.num_tets();
  const int kp = correction.degree;
  const auto grad = phi.gradient(mesh);
  const auto& qr = quadrature(QuadDomain::Tet, detail::clamp_exactness(2 * kp));
  EstimatorResult out;
  out.H_hat = correction.H;
  out.H_tilde.cells.resize(nt);
  out.eta.assign(nt, 0.0);
  parallel_for(nt, exec, [&](std::size_t t) {
    const int ti = static_cast<int>(t);
    VecPoly h = correction.H.cells[t].promoted(std::max(kp, grad.cells[t].degree));
    h += grad.cells[t].promoted(h.degree);
    const auto g = element_geometry(mesh, ti);
    double s = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) s += qr.weights[q] * h.eval(qr.points[q]).squaredNorm();
    out.eta[t] = std::sqrt(mu.mu_on(mesh, ti) * g.absdet * s);
    out.H_tilde.cells[t] = std::move(h);
  });
  double s = 0.0;
  for (double e : out.eta) s += e * e;
  out.eta_h = std::sqrt(s);
  return out;
}

EquilibriumReport verify_equilibrium(const Mesh& mesh, const CurrentDensity& j,
                                     const DiscreteField& Hh, const EstimatorResult& result,
                                     double tol, bool throw_on_failure, unsigned seed) {
  const std::size_t nt = mesh.num_tets();
  const int kp = result.H_tilde.degree();
  const auto& qt = quadrature(QuadDomain::Tet, j.norm_exactness(kp));
  const auto& qf = quadrature(QuadDomain::Triangle, detail::clamp_exactness(2 * kp));
  EquilibriumReport rep;

  double jn = 0.0, hn = 0.0;
  for (std::size_t t = 0; t < nt; ++t) {
    const int ti = static_cast<int>(t);
    const auto g = element_geometry(mesh, ti);
    const VecPoly curl = physical_curl(result.H_tilde.cells[t], g.Jinv);
    double r = 0.0;
    for (std::size_t q = 0; q < qt.size(); ++q) {
      const Vec3& x = qt.points[q];
      const double w = qt.weights[q] * g.absdet;
      const Vec3 jv = j.value(ti, g, x);
      r += w * (Hh.jh.eval(ti, x) + curl.eval(x) - jv).squaredNorm();
      jn += w * jv.squaredNorm();
      hn += w * Hh.H.eval(ti, x).squaredNorm();
    }
    rep.max_element_residual = std::max(rep.max_element_residual, std::sqrt(r));
  }

  auto total = [&](int t, const ElementGeometry& g, const Vec3& x, const BrokenVectorField& F) {
    const Vec3 xh = g.to_reference(x);
    return Vec3(Hh.H.eval(t, xh) + F.eval(t, xh));
  };
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(static_cast<int>(f));
    if (face.is_boundary()) continue;
    const auto fp = detail::face_patch(mesh, static_cast<int>(f));
    const auto gp = element_geometry(mesh, face.plus);
    const auto gm = element_geometry(mesh, face.minus);
    double s = 0.0;
    for (std::size_t q = 0; q < qf.size(); ++q) {
      const Vec3 x = fp.at(qf.points[q].x(), qf.points[q].y());
      const Vec3 d = total(face.plus, gp, x, result.H_tilde) - total(face.minus, gm, x, result.H_tilde);
      s += qf.weights[q] * fp.jac * face.normal.cross(d).squaredNorm();
    }
    rep.max_face_jump = std::max(rep.max_face_jump, std::sqrt(s));
  }

  const double h = mesh.h_max();
  rep.scale = std::sqrt(jn) + std::sqrt(hn) / h;
  const double denom = rep.scale > 0.0 ? rep.scale : 1.0;
  rep.element_relative = rep.max_element_residual / denom;
  rep.face_relative = rep.max_face_jump / (denom * std::sqrt(h));

  // sum_f (jhat_f, grad psi)_f for continuous psi in P_k' vanishing on the boundary.
  const DofMap lag = build_dofmap(mesh, SpaceKind::P_scalar_tet, kp, true);
  const auto& P = reference_space(SpaceKind::P_scalar_tet, kp);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int sample = 0; sample < 3 && lag.num_free() > 0; ++sample) {
    Eigen::VectorXd free(lag.num_free());
    for (Eigen::Index i = 0; i < free.size(); ++i) free[i] = uni(rng);
    const Eigen::VectorXd psi = lag.expand(free);
    double acc = 0.0, norm = 0.0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
      const Face& face = mesh.face(static_cast<int>(f));
      if (face.is_boundary()) continue;
      const auto fp = detail::face_patch(mesh, static_cast<int>(f));
      const auto gp = element_geometry(mesh, face.plus);
      const auto gm = element_geometry(mesh, face.minus);
      Eigen::VectorXd loc(P.dim());
      const int* l2g = lag.cell_dofs(face.plus);
      for (int i = 0; i < P.dim(); ++i) loc[i] = psi[l2g[i]];
      const VecPoly gpsi = physical_gradient(P.coefficients() * loc, kp, gp.Jinv);
      double jj = 0.0, gg = 0.0;
      for (std::size_t q = 0; q < qf.size(); ++q) {
        const Vec3 x = fp.at(qf.points[q].x(), qf.points[q].y());
        const Vec3 jhat = face.normal.cross(total(face.plus, gp, x, result.H_hat) -
                                            total(face.minus, gm, x, result.H_hat));
        const Vec3 gv = gpsi.eval(gp.to_reference(x));
        const double w = qf.weights[q] * fp.jac;
        acc += w * jhat.dot(gv);
        jj += w * jhat.squaredNorm();
        gg += w * gv.squaredNorm();
      }
      norm += std::sqrt(jj * gg);
    }
    if (norm > 0.0) rep.gradient_orthogonality = std::max(rep.gradient_orthogonality, std::abs(acc) / norm);
  }

  rep.passed = rep.element_relative <= tol && rep.face_relative <= tol;
  if (throw_on_failure && !rep.passed) {
    throw Error(ErrorCode::EquilibriumViolated,
                "element residual " + std::to_string(rep.element_relative) + ", face jump " +
                    std::to_string(rep.face_relative) + " (relative)");
  }
  return rep;
}

EquilibrationResult equilibrate(const Mesh& mesh, const MaterialField& mu, const CurrentDensity& j,
                                const DiscreteField& Hh, const EquilibrationOptions& opts) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  EquilibrationResult r;
  auto t0 = clock::now();
  r.step1 = step1_element_corrections(mesh, mu, j, Hh, opts);
  auto t1 = clock::now();
  r.step2 = step2_face_multipliers(mesh, Hh, r.step1, opts);
  r.edges = check_edge_compatibility(mesh, r.step2);
  auto t2 = clock::now();
  r.step3 = step3_reconstruct_phi(mesh, r.step2, opts);
  auto t3 = clock::now();
  r.estimate = step4_estimator(mesh, mu, r.step1, r.step3, opts.exec);
  auto t4 = clock::now();
  r.seconds[0] = seconds(t0, t1);
  r.seconds[1] = seconds(t1, t2);
  r.seconds[2] = seconds(t2, t3);
  r.seconds[3] = seconds(t3, t4);
  return r;
}

}  // namespace ndeq
