// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#include "ndeq/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include <json.hpp>

#include "ndeq/mesh_io.hpp"

namespace ndeq {

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(); }

void check_invariants(ExperimentReport& r) {
  auto& f = r.failures;
  if (!std::isnan(r.consistency_defect) && !(r.consistency_defect <= 1e-8)) {
    f.push_back("consistency defect " + num(r.consistency_defect) + " exceeds 1e-8");
  }
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    if (row.level != static_cast<int>(i)) f.push_back("level column not monotone at row " + std::to_string(i));
    if (i > 0 && row.n_dofs <= r.rows[i - 1].n_dofs) {
      f.push_back("N_dofs not increasing at level " + std::to_string(row.level));
    }
    const bool eq = r.config.adapt.estimator != EstimatorChoice::Residual;
    if (r.config.adapt.strict_a2 && eq) {
      if (!row.equilibrium_passed) f.push_back("equilibrium violated at level " + std::to_string(row.level));
      if (!std::isnan(row.eff_eq) && row.eff_eq < 1.0 - 1e-6) {
        f.push_back("eff_eq " + num(row.eff_eq) + " below 1 at level " + std::to_string(row.level));
      }
    }
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string s = "# ndeq report schema v1\n";
  s += "schema,problem,level,resolution,n_tets,n_dofs,h_max,error,reference_error,eta,mu_res,"
       "eff_eq,eff_res,oscillation,step1_residual,lambda_max,max_re,max_re_variation,"
       "max_face_divergence,max_patch_residual,a2,eq_element_relative,eq_face_relative,"
       "eq_passed,pythagoras_defect,local_efficiency,marked,marked_near_feature,tets_near_feature,"
       "solver_iterations\n";
  for (const auto& r : report.rows) {
    s += "v1," + report.problem + "," + std::to_string(r.level) + "," + std::to_string(r.resolution) + "," +
         std::to_string(r.n_tets) + "," + std::to_string(r.n_dofs) + "," + num(r.h_max) + "," + num(r.error) +
         "," + num(r.reference_error) + "," + num(r.eta) + "," + num(r.mu_res) + "," + num(r.eff_eq) + "," +
         num(r.eff_res) + "," + num(r.oscillation) + "," + num(r.step1_residual) + "," + num(r.lambda_max) +
         "," + num(r.max_re) + "," + num(r.max_re_variation) + "," + num(r.max_face_divergence) + "," +
         num(r.max_patch_residual) + "," + (r.a2 ? "1" : "0") + "," + num(r.eq_element_relative) + "," +
         num(r.eq_face_relative) + "," + (r.equilibrium_passed ? "1" : "0") + "," + num(r.pythagoras_defect) +
         "," + num(r.local_efficiency) + "," + std::to_string(r.marked) + "," +
         std::to_string(r.marked_near_feature) + "," + std::to_string(r.tets_near_feature) + "," +
         std::to_string(r.solver_iterations) + "\n";
  }
  return s;
}

std::string report_json(const ExperimentReport& report) {
  using nlohmann::json;
  const auto& a = report.config.adapt;
  json cfg = {{"theta", a.theta},
              {"max_levels", a.max_levels},
              {"max_dofs", a.max_dofs},
              {"estimator", to_string(a.estimator)},
              {"degree", a.degree},
              {"aux_degree", a.k_aux()},
              {"mode", to_string(a.mode)},
              {"initial_n", a.initial_n},
              {"strict_a2", a.strict_a2},
              {"face_mode", a.face_mode == FaceSolveMode::Weak ? "weak" : "strong"},
              {"backend", a.solver.backend == SolverBackend::Direct ? "direct" : "cg"},
              {"solver_tol", a.solver.tol},
              {"max_iter", a.solver.max_iter},
              {"threads", a.exec.threads},
              {"reference_levels", a.reference_levels}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"level", r.level},
                    {"resolution", r.resolution},
                    {"n_tets", r.n_tets},
                    {"n_dofs", r.n_dofs},
                    {"h_max", jnum(r.h_max)},
                    {"error", jnum(r.error)},
                    {"reference_error", jnum(r.reference_error)},
                    {"eta", jnum(r.eta)},
                    {"mu_res", jnum(r.mu_res)},
                    {"eff_eq", jnum(r.eff_eq)},
                    {"eff_res", jnum(r.eff_res)},
                    {"marked", r.marked},
                    {"marked_near_feature", r.marked_near_feature},
                    {"tets_near_feature", r.tets_near_feature},
                    {"diagnostics",
                     {{"oscillation", jnum(r.oscillation)},
                      {"step1_residual", jnum(r.step1_residual)},
                      {"lambda_max", jnum(r.lambda_max)},
                      {"max_re", jnum(r.max_re)},
                      {"max_re_variation", jnum(r.max_re_variation)},
                      {"max_face_divergence", jnum(r.max_face_divergence)},
                      {"max_patch_residual", jnum(r.max_patch_residual)},
                      {"a2", r.a2},
                      {"eq_element_relative", jnum(r.eq_element_relative)},
                      {"eq_face_relative", jnum(r.eq_face_relative)},
                      {"eq_gradient_orthogonality", jnum(r.eq_gradient_orthogonality)},
                      {"equilibrium_passed", r.equilibrium_passed},
                      {"pythagoras_defect", jnum(r.pythagoras_defect)},
                      {"local_efficiency", jnum(r.local_efficiency)},
                      {"solver_iterations", r.solver_iterations},
                      {"solver_residual", jnum(r.solver_residual)}}},
                    {"seconds",
                     {{"assemble", r.seconds.assemble},
                      {"solve", r.seconds.solve},
                      {"step1", r.seconds.step1},
                      {"step2", r.seconds.step2},
                      {"step3", r.seconds.step3},
                      {"step4", r.seconds.step4},
                      {"residual", r.seconds.residual},
                      {"error", r.seconds.error},
                      {"mark", r.seconds.mark},
                      {"refine", r.seconds.refine}}}});
  }
  json failure = nullptr;
  if (!report.error_code.empty()) failure = {{"code", report.error_code}, {"message", report.error_message}};
  json doc = {{"schema", "ndeq-report-v1"},
              {"problem", report.problem},
              {"config", cfg},
              {"consistency_defect", jnum(report.consistency_defect)},
              {"divergence_defect", jnum(report.divergence_defect)},
              {"rows", rows},
              {"invariant_failures", report.failures},
              {"error", failure},
              {"ok", report.ok()}};
  return doc.dump(2) + "\n";
}

ExperimentReport run_experiment(const ProblemSpec& spec, const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.problem = spec.name;
  report.config = cfg;
  std::filesystem::path dir;
  if (!cfg.out_dir.empty()) {
    dir = cfg.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  }
  try {
    if (spec.consistency_defect) report.consistency_defect = spec.consistency_defect();
    if (spec.divergence_defect) report.divergence_defect = spec.divergence_defect();
    LevelCallback cb;
    if (!dir.empty() && cfg.write_vtk) {
      cb = [&](const Mesh& mesh, const LevelRecord& rec, const LevelFields& fields) {
        std::vector<CellScalar> data;
        if (!fields.eta.empty()) data.push_back({"eta", fields.eta});
        if (!fields.mu_T.empty()) data.push_back({"mu_T", fields.mu_T});
        if (!fields.error.empty()) data.push_back({"error", fields.error});
        write_vtk_file((dir / ("mesh_level_" + std::to_string(rec.level) + ".vtk")).string(), mesh, data);
      };
    }
    report.rows = adaptive_loop(spec, cfg.adapt, cb);
  } catch (const Error& e) {
    report.error_code = to_string(e.code());
    report.error_message = e.message();
  }
  check_invariants(report);
  if (!dir.empty()) {
    write_text(dir / "report.csv", report_csv(report));
    write_text(dir / "report.json", report_json(report));
  }
  return report;
}

}  // namespace ndeq
