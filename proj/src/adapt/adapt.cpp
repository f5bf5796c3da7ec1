// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/adapt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "ndeq/quadrature.hpp"
#include "ndeq/residual.hpp"

namespace ndeq {

const char* to_string(EstimatorChoice e) {
  switch (e) {
    case EstimatorChoice::Equilibrated: return "eq";
    case EstimatorChoice::Residual: return "res";
    case EstimatorChoice::Both: return "both";
  }
  return "unknown";
}

const char* to_string(RefinementMode m) {
  return m == RefinementMode::Uniform ? "uniform" : "adaptive";
}

void AdaptiveConfig::validate() const {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  if (max_levels < 1) throw Error(ErrorCode::InvalidArgument, "max_levels must be positive");
  if (degree < 1 || degree > 4) throw Error(ErrorCode::UnsupportedDegree, "degree must lie in 1..4");
  if (k_aux() < degree || k_aux() > 4) {
    throw Error(ErrorCode::UnsupportedDegree, "auxiliary degree must lie in degree..4");
  }
  if (initial_n < 1) throw Error(ErrorCode::InvalidArgument, "initial resolution must be positive");
  if (reference_levels < 0) throw Error(ErrorCode::InvalidArgument, "reference_levels must be >= 0");
}

std::set<int> dorfler_mark(const std::vector<double>& etas, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw Error(ErrorCode::InvalidArgument, "theta must lie in (0, 1]");
  std::vector<int> order(etas.size());
  std::iota(order.begin(), order.end(), 0);
  for (double e : etas) {
    if (!(e >= 0.0)) throw Error(ErrorCode::InvalidArgument, "estimator values must be non-negative");
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return etas[a] > etas[b]; });
  // Summing in the same order as the greedy pass makes theta = 1 reach the
  // total exactly.
  double total = 0.0;
  for (int i : order) total += etas[i] * etas[i];
  std::set<int> marked;
  double acc = 0.0;
  for (int i : order) {
    if (acc >= theta * total) break;
    marked.insert(i);
    acc += etas[i] * etas[i];
  }
  return marked;
}

namespace {

using clock = std::chrono::steady_clock;

double since(clock::time_point t0) { return std::chrono::duration<double>(clock::now() - t0).count(); }

BrokenVectorField sum(const BrokenVectorField& a, const BrokenVectorField& b) {
  BrokenVectorField out;
  out.cells.resize(a.cells.size());
  for (std::size_t t = 0; t < a.cells.size(); ++t) {
    const int d = std::max(a.cells[t].degree, b.cells[t].degree);
    out.cells[t] = a.cells[t].promoted(d) + b.cells[t].promoted(d);
  }
  return out;
}

void marking_stats(const Mesh& mesh, const ProblemSpec& spec, const std::set<int>& marked, LevelRecord& rec) {
  rec.marked = marked.size();
  rec.marked_near_feature = 0;
  rec.tets_near_feature = 0;
  if (!spec.touches_feature) return;
  for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
    if (spec.touches_feature(mesh, static_cast<int>(t))) {
      ++rec.tets_near_feature;
      if (marked.count(static_cast<int>(t))) ++rec.marked_near_feature;
    }
  }
}

const std::vector<double>& marking_values(const LevelSolution& s, const AdaptiveConfig& cfg) {
  return cfg.estimator == EstimatorChoice::Residual ? s.fields.mu_T : s.fields.eta;
}

}  // namespace

LevelSolution solve_level(const Mesh& mesh, const ProblemSpec& spec, const AdaptiveConfig& cfg) {
  cfg.validate();
  const int k = cfg.degree;
  const int kp = cfg.k_aux();
  LevelSolution out;
  LevelRecord& rec = out.record;
  rec.n_tets = mesh.num_tets();
  rec.h_max = mesh.h_max();

  auto t0 = clock::now();
  const DofMap ned = build_dofmap(mesh, SpaceKind::Nedelec1_tet, k, true);
  const DofMap lag = build_dofmap(mesh, SpaceKind::P_scalar_tet, k, true);
  rec.n_dofs = ned.num_free();
  const CurrentDensity j = cfg.strict_a2 ? project_current(mesh, spec.j, kp, cfg.exec)
                                         : CurrentDensity::analytic(spec.j, spec.j_degree);
  rec.a2 = cfg.strict_a2 || (spec.j_degree >= 0 && spec.j_degree <= kp - 1);
  const SparseMatrix A = assemble_curlcurl(mesh, ned, spec.mu, cfg.exec);
  const SparseMatrix M = assemble_mass(mesh, ned, cfg.exec);
  const SparseMatrix G = discrete_gradient(mesh, ned, lag);
  const Eigen::VectorXd rhs = gradient_correction(G, assemble_rhs(mesh, ned, j, cfg.exec));
  rec.seconds.assemble = since(t0);

  t0 = clock::now();
  SolveReport srep;
  const Eigen::VectorXd u = solve_magnetostatic(A, M, rhs, cfg.solver, &srep);
  rec.solver_iterations = srep.iterations;
  rec.solver_residual = srep.relative_residual;
  out.Hh = compute_Hh(mesh, ned, ned.expand(u), spec.mu, cfg.exec);
  rec.seconds.solve = since(t0);

  const bool use_eq = cfg.estimator != EstimatorChoice::Residual;
  const bool use_res = cfg.estimator != EstimatorChoice::Equilibrated;
  if (use_eq) {
    EquilibrationOptions opts;
    opts.degree = kp;
    opts.strict_a2 = cfg.strict_a2;
    opts.face_mode = cfg.face_mode;
    opts.exec = cfg.exec;
    out.equilibration = equilibrate(mesh, spec.mu, j, out.Hh, opts);
    const auto& eq = out.equilibration;
    rec.seconds.step1 = eq.seconds[0];
    rec.seconds.step2 = eq.seconds[1];
    rec.seconds.step3 = eq.seconds[2];
    rec.seconds.step4 = eq.seconds[3];
    rec.eta = eq.estimate.eta_h;
    out.fields.eta = eq.estimate.eta;
    rec.oscillation = eq.step1.oscillation(mesh);
    rec.step1_residual = eq.step1.max_residual();
    rec.lambda_max = eq.step2.max_abs();
    rec.max_re = eq.edges.max_abs_all();
    rec.max_re_variation = eq.edges.max_variation();
    rec.max_face_divergence = eq.step2.max_divergence();
    rec.max_patch_residual = eq.step3.max_patch_residual;
    if (rec.a2) {
      const auto er = verify_equilibrium(mesh, j, out.Hh, eq.estimate, 1e-9, false);
      rec.eq_element_relative = er.element_relative;
      rec.eq_face_relative = er.face_relative;
      rec.eq_gradient_orthogonality = er.gradient_orthogonality;
      rec.equilibrium_passed = er.passed;
    }
  }
  if (use_res) {
    t0 = clock::now();
    const auto rr = compute_residual_estimator(mesh, spec.mu, j, out.Hh, k, cfg.exec);
    rec.mu_res = rr.mu_h;
    out.fields.mu_T = rr.mu_T;
    rec.seconds.residual = since(t0);
  }

  if (spec.trusted_exact && spec.H_exact) {
    t0 = clock::now();
    const auto err = compute_error(mesh, spec.mu, out.Hh.H, *spec.H_exact, 2 * k + 4, cfg.exec);
    rec.error = err.total;
    out.fields.error = err.per_tet;
    rec.eff_eq = rec.eta / rec.error;
    rec.eff_res = rec.mu_res / rec.error;
    if (use_eq) {
      const auto tilde = sum(out.Hh.H, out.equilibration.estimate.H_tilde);
      const double e2 = compute_error(mesh, spec.mu, tilde, *spec.H_exact, 2 * kp + 4, cfg.exec).total;
      rec.pythagoras_defect =
          std::abs(rec.eta * rec.eta - e2 * e2 - rec.error * rec.error) / (rec.eta * rec.eta);
      double worst = 0.0;
      for (std::size_t t = 0; t < mesh.num_tets(); ++t) {
        double s = err.per_tet[t] * err.per_tet[t];
        for (int f : mesh.tet_faces(static_cast<int>(t))) {
          const Face& face = mesh.face(f);
          if (face.is_boundary()) continue;
          const int nb = face.plus == static_cast<int>(t) ? face.minus : face.plus;
          s += err.per_tet[nb] * err.per_tet[nb];
        }
        if (s > 0.0) worst = std::max(worst, out.fields.eta[t] / std::sqrt(s));
      }
      rec.local_efficiency = worst;
    }
    rec.seconds.error = since(t0);
  }
  return out;
}

std::vector<LevelRecord> adaptive_loop(const ProblemSpec& spec, const AdaptiveConfig& cfg,
                                       const LevelCallback& on_level) {
  cfg.validate();
  const bool adaptive = cfg.mode == RefinementMode::Adaptive;
  const bool want_reference = adaptive && cfg.reference_levels > 0 && !spec.trusted_exact;
  std::vector<LevelRecord> rows;
  std::vector<Mesh> meshes;
  std::vector<BrokenVectorField> fields;
  int n = cfg.initial_n;
  Mesh mesh = spec.make_mesh(n);

  auto mark_and_refine = [&](const LevelSolution& sol, LevelRecord& rec, bool refine_mesh) {
    auto t0 = clock::now();
    const auto marked = dorfler_mark(marking_values(sol, cfg), cfg.theta);
    marking_stats(mesh, spec, marked, rec);
    rec.seconds.mark = since(t0);
    if (!refine_mesh) return;
    t0 = clock::now();
    mesh = refine(mesh, marked);
    rec.seconds.refine = since(t0);
  };

  for (int level = 0;; ++level) {
    LevelSolution sol;
    try {
      sol = solve_level(mesh, spec, cfg);
    } catch (const Error& e) {
      throw Error(e.code(), "level " + std::to_string(level) + ": " + e.message());
    }
    LevelRecord& rec = sol.record;
    rec.level = level;
    rec.resolution = adaptive ? 0 : n;
    const bool last = level + 1 >= cfg.max_levels || rec.n_dofs >= cfg.max_dofs;
    if (want_reference) {
      meshes.push_back(mesh);
      fields.push_back(sol.Hh.H);
    }
    const Mesh current = mesh;
    if (adaptive) {
      mark_and_refine(sol, rec, !last || want_reference);
    } else if (!last) {
      n *= 2;
      mesh = spec.make_mesh(n);
    }
    if (on_level) on_level(current, rec, sol.fields);
    rows.push_back(rec);
    if (last) break;
  }

  if (want_reference) {
    // Refine further and measure every reported level against the finest
    // solution through the refinement genealogy.
    std::vector<std::vector<int>> parents;  // parents[i]: tet of mesh i+1 -> tet of mesh i
    for (std::size_t i = 1; i < meshes.size(); ++i) {
      std::vector<int> p(meshes[i].num_tets());
      for (std::size_t t = 0; t < p.size(); ++t) p[t] = meshes[i].parent(static_cast<int>(t));
      parents.push_back(std::move(p));
    }
    for (int extra = 0; extra < cfg.reference_levels; ++extra) {
      std::vector<int> p(mesh.num_tets());
      for (std::size_t t = 0; t < p.size(); ++t) p[t] = mesh.parent(static_cast<int>(t));
      parents.push_back(std::move(p));
      meshes.push_back(mesh);
      if (extra + 1 < cfg.reference_levels) {
        const LevelSolution sol = solve_level(mesh, spec, cfg);
        mesh = refine(mesh, dorfler_mark(marking_values(sol, cfg), cfg.theta));
      }
    }
    const Mesh& fine = meshes.back();
    const LevelSolution ref = solve_level(fine, spec, cfg);
    const int k = cfg.degree;
    const auto& qr = quadrature(QuadDomain::Tet, std::min(2 * k + 4, kMaxQuadratureExactness));
    const std::size_t finest = meshes.size() - 1;
    for (std::size_t level = 0; level < rows.size(); ++level) {
      double s = 0.0;
      for (std::size_t t = 0; t < fine.num_tets(); ++t) {
        int anc = static_cast<int>(t);
        for (std::size_t i = finest; i > level; --i) anc = parents[i - 1][anc];
        const auto gf = element_geometry(fine, static_cast<int>(t));
        const auto gc = element_geometry(meshes[level], anc);
        const double mu = spec.mu.mu_on(fine, static_cast<int>(t));
        double e = 0.0;
        for (std::size_t q = 0; q < qr.size(); ++q) {
          const Vec3 x = gf.map(qr.points[q]);
          e += qr.weights[q] * (ref.Hh.H.eval(static_cast<int>(t), qr.points[q]) -
                                fields[level].eval(anc, gc.to_reference(x)))
                                   .squaredNorm();
        }
        s += mu * gf.absdet * e;
      }
      rows[level].reference_error = std::sqrt(s);
    }
  }
  return rows;
}

}  // namespace ndeq
