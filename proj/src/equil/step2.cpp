// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "internal.hpp"
#include "ndeq/equilibrate.hpp"

namespace ndeq {

namespace {

// Points (i/k, j/k), i + j <= k, in monomial order.
std::vector<Vec3> face_lattice(int k) {
  std::vector<Vec3> pts;
  const auto& mono = monomials(2, k);
  for (int a = 0; a < mono.size(); ++a) {
    const auto& e = mono.exponent(a);
    pts.emplace_back(static_cast<double>(e[0]) / k, static_cast<double>(e[1]) / k, 0.0);
  }
  return pts;
}

}  // namespace

FaceProblemResult solve_face_problem(const std::array<Vec3, 3>& p, const Vec3& n, int degree,
                                     const std::function<Vec3(double s, double t)>& jhat,
                                     FaceSolveMode mode) {
  const auto fp = detail::face_patch(p);
  const auto& mono = monomials(2, degree);
  const int nm = mono.size();
  Eigen::Matrix<double, 3, 2> E;
  E << fp.e1, fp.e2;
  const Eigen::Matrix2d Ginv = (E.transpose() * E).inverse();
  const Eigen::Matrix<double, 3, 2> P = E * Ginv;  // grad_f = P (d/ds, d/dt)

  const auto& qr = quadrature(QuadDomain::Triangle, detail::clamp_exactness(2 * degree));
  const std::size_t nq = qr.size();
  const Eigen::MatrixXd T = mono.table(qr.points);
  const Eigen::MatrixXd Ds = mono.derivative(0).transpose() * T;
  const Eigen::MatrixXd Dt = mono.derivative(1).transpose() * T;
  Eigen::VectorXd w(nq);
  std::vector<Vec3> jq(nq), gq(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    w[q] = qr.weights[q] * fp.jac;
    jq[q] = jhat(qr.points[q].x(), qr.points[q].y());
    gq[q] = n.cross(jq[q]);  // target for grad_f lambda
  }
  const Eigen::VectorXd mass = T * w;

  // Coefficients of d/ds lambda and d/dt lambda from lattice interpolation.
  const auto lattice = face_lattice(degree);
  const Eigen::MatrixXd V = mono.table(lattice).transpose();
  Eigen::VectorXd av(nm), bv(nm);
  for (int i = 0; i < nm; ++i) {
    const Vec3 g = n.cross(jhat(lattice[i].x(), lattice[i].y()));
    av[i] = fp.e1.dot(g);
    bv[i] = fp.e2.dot(g);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> vlu(V);
  const Eigen::VectorXd acoef = vlu.solve(av);
  const Eigen::VectorXd bcoef = vlu.solve(bv);

  FaceProblemResult out;
  if (mode == FaceSolveMode::Weak) {
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(nm + 1, nm + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nm + 1);
    for (std::size_t q = 0; q < nq; ++q) {
      Eigen::Matrix<double, 2, Eigen::Dynamic> d(2, nm);
      d.row(0) = Ds.col(q).transpose();
      d.row(1) = Dt.col(q).transpose();
      S.topLeftCorner(nm, nm) += w[q] * d.transpose() * Ginv * d;
      rhs.head(nm) += w[q] * d.transpose() * (P.transpose() * gq[q]);
    }
    // Border scaled to the stiffness block.
    const double b = S.topLeftCorner(nm, nm).norm() / std::max(mass.norm(), 1e-300);
    S.block(0, nm, nm, 1) = b * mass;
    S.block(nm, 0, 1, nm) = b * mass.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
    if (lu.rank() != nm + 1) {
      throw Error(ErrorCode::FaceSolveSingular, "face system has rank " + std::to_string(lu.rank()));
    }
    out.lambda = lu.solve(rhs).head(nm);
  } else {
    Eigen::MatrixXd M(2 * nm, nm - 1);
    M.topRows(nm) = mono.derivative(0).rightCols(nm - 1);
    M.bottomRows(nm) = mono.derivative(1).rightCols(nm - 1);
    Eigen::VectorXd r(2 * nm);
    r << acoef, bcoef;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrm(M);
    if (qrm.rank() != nm - 1) {
      throw Error(ErrorCode::FaceSolveSingular, "coefficient matching is rank deficient");
    }
    out.lambda = Eigen::VectorXd::Zero(nm);
    out.lambda.tail(nm - 1) = qrm.solve(r);
    out.lambda[0] = -mass.tail(nm - 1).dot(out.lambda.tail(nm - 1)) / mass[0];
  }

  // rot of grad_f lambda's target in face coordinates; equals the in-plane
  // divergence of jhat up to the Jacobian.
  const Eigen::VectorXd rot = mono.derivative(1) * acoef - mono.derivative(0) * bcoef;
  double div2 = 0.0, res2 = 0.0, jn2 = 0.0;
  const Eigen::VectorXd lam_s = Ds.transpose() * out.lambda;
  const Eigen::VectorXd lam_t = Dt.transpose() * out.lambda;
  for (std::size_t q = 0; q < nq; ++q) {
    const double d = T.col(q).dot(rot) / fp.jac;
    div2 += w[q] * d * d;
    const Vec3 grad = P.col(0) * lam_s[q] + P.col(1) * lam_t[q];
    res2 += w[q] * (-n.cross(grad) - jq[q]).squaredNorm();
    jn2 += w[q] * jq[q].squaredNorm();
  }
  out.divergence = std::sqrt(div2);
  out.residual = std::sqrt(res2);
  out.jump_norm = std::sqrt(jn2);
  out.mean = mass.dot(out.lambda);
  return out;
}

double FaceMultiplier::eval(int slot, double s, double t) const {
  return monomials(2, degree).eval(Vec3(s, t, 0.0)).dot(solutions[slot].lambda);
}

double FaceMultiplier::eval_barycentric(const Mesh& mesh, int slot,
                                        const std::vector<std::pair<int, double>>& weights) const {
  const auto& v = mesh.face(faces[slot]).v;
  double s = 0.0, t = 0.0;
  for (const auto& [vertex, wgt] : weights) {
    if (vertex == v[1]) s += wgt;
    else if (vertex == v[2]) t += wgt;
    else if (vertex != v[0]) {
      throw Error(ErrorCode::NotAdjacent, "vertex " + std::to_string(vertex) + " is not on face " +
                                              std::to_string(faces[slot]));
    }
  }
  return eval(slot, s, t);
}

double FaceMultiplier::max_abs() const {
  if (solutions.empty()) return 0.0;
  const Eigen::MatrixXd V = monomials(2, degree).table(face_lattice(degree));
  double m = 0.0;
  for (const auto& s : solutions) m = std::max(m, (V.transpose() * s.lambda).cwiseAbs().maxCoeff());
  return m;
}

double FaceMultiplier::max_divergence() const {
  double m = 0.0;
  for (const auto& s : solutions) m = std::max(m, s.divergence);
  return m;
}

double FaceMultiplier::max_residual() const {
  double m = 0.0;
  for (const auto& s : solutions) m = std::max(m, s.residual);
  return m;
}

FaceMultiplier step2_face_multipliers(const Mesh& mesh, const DiscreteField& Hh,
                                      const ElementCorrection& correction,
                                      const EquilibrationOptions& opts) {
  FaceMultiplier out;
  out.degree = opts.degree;
  out.slot_of_face.assign(mesh.num_faces(), -1);
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    if (mesh.face(static_cast<int>(f)).is_boundary()) continue;
    out.slot_of_face[f] = static_cast<int>(out.faces.size());
    out.faces.push_back(static_cast<int>(f));
  }
  out.solutions.resize(out.faces.size());
  parallel_for(out.faces.size(), opts.exec, [&](std::size_t slot) {
    const int f = out.faces[slot];
    const Face& face = mesh.face(f);
    const auto fp = detail::face_patch(mesh, f);
    const auto gp = element_geometry(mesh, face.plus);
    const auto gm = element_geometry(mesh, face.minus);
    auto field = [&](int t, const ElementGeometry& g, const Vec3& x) {
      const Vec3 xh = g.to_reference(x);
      return Vec3(Hh.H.eval(t, xh) + correction.H.eval(t, xh));
    };
    auto jhat = [&](double s, double t) {
      const Vec3 x = fp.at(s, t);
      return Vec3(face.normal.cross(field(face.plus, gp, x) - field(face.minus, gm, x)));
    };
    out.solutions[slot] = solve_face_problem(fp.p, face.normal, opts.degree, jhat, opts.face_mode);
  });
  if (opts.strict_a2) {
    double jmax = 0.0;
    for (const auto& s : out.solutions) jmax = std::max(jmax, s.jump_norm);
    for (std::size_t slot = 0; slot < out.size(); ++slot) {
      const double h = mesh.face_diameter(out.faces[slot]);
      if (out.solutions[slot].divergence > opts.osc_tol * jmax / h) {
        throw Error(ErrorCode::FaceIncompatible,
                    "in-plane divergence " + std::to_string(out.solutions[slot].divergence) +
                        " on face " + std::to_string(out.faces[slot]));
      }
    }
  }
  return out;
}

double EdgeCompatibility::max_abs_all() const {
  double m = 0.0;
  for (double v : max_abs) m = std::max(m, v);
  return m;
}

double EdgeCompatibility::max_variation() const {
  double m = 0.0;
  for (double v : variation) m = std::max(m, v);
  return m;
}

EdgeCompatibility check_edge_compatibility(const Mesh& mesh, const FaceMultiplier& lambdas) {
  EdgeCompatibility out;
  const auto& qr = quadrature(QuadDomain::Segment, detail::clamp_exactness(2 * std::max(lambdas.degree, 1)));
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edge(static_cast<int>(e));
    if (ed.on_boundary) continue;
    double lo = 0.0, hi = 0.0, amax = 0.0;
    for (std::size_t q = 0; q < qr.size(); ++q) {
      const double sigma = qr.points[q].x();
      double r = 0.0;
      for (int f : ed.faces) {
        const int slot = lambdas.slot_of_face[f];
        if (slot < 0) continue;
        const Vec3 nfe = edge_face_normals(mesh, static_cast<int>(e), f).n_fe;
        const double sign = mesh.face(f).normal.dot(nfe);
        r += sign * lambdas.eval_barycentric(mesh, slot, {{ed.v[0], 1.0 - sigma}, {ed.v[1], sigma}});
      }
      if (q == 0) lo = hi = r;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      amax = std::max(amax, std::abs(r));
    }
    out.edges.push_back(static_cast<int>(e));
    out.max_abs.push_back(amax);
    out.variation.push_back(hi - lo);
  }
  return out;
}

}  // namespace ndeq
