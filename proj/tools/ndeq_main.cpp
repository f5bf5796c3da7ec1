// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// ndeq command line driver.
//
//   ndeq list
//   ndeq [--config file] run <problem> [--degree k] [--aux-degree k']
//            [--mode uniform|adaptive] [--levels L] [--theta t]
//            [--estimator eq|res|both] [--strict-a2] [--out dir]
//            [--threads n | --sequential] ...
//
// The config file holds key = value lines named after the long run flags,
// under a [run] section; flags given on the command line win.

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "ndeq/experiment.hpp"

namespace {

using namespace ndeq;

void print_rows(const ExperimentReport& r) {
  std::printf("%5s %8s %9s %12s %12s %12s %8s %8s %8s\n", "level", "tets", "dofs", "error", "eta", "mu_res",
              "eff_eq", "eff_res", "marked");
  for (const auto& row : r.rows) {
    std::printf("%5d %8zu %9zu %12.5e %12.5e %12.5e %8.4f %8.4f %8zu\n", row.level, row.n_tets, row.n_dofs,
                row.error, row.eta, row.mu_res, row.eff_eq, row.eff_res, row.marked);
  }
}

void export_matrix(const ProblemSpec& spec, const AdaptiveConfig& cfg, const std::string& path) {
  const Mesh mesh = spec.make_mesh(cfg.initial_n);
  const DofMap ned = build_dofmap(mesh, SpaceKind::Nedelec1_tet, cfg.degree, true);
  write_matrix_market(path, assemble_curlcurl(mesh, ned, spec.mu, cfg.exec));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nedelec magnetostatics with equilibrated error estimation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file mirroring the run flags");

  auto* list = app.add_subcommand("list", "List builtin problems");

  auto* run = app.add_subcommand("run", "Run an experiment and write report.csv / report.json");
  std::string problem;
  ExperimentConfig ecfg;
  AdaptiveConfig& cfg = ecfg.adapt;
  std::string mode = "adaptive", estimator = "both", face_mode = "weak", backend = "direct";
  std::string matrix_path;
  int threads = 1;
  bool sequential = false;
  run->add_option("problem", problem, "Problem name (see `list`)")->required();
  run->add_option("--degree", cfg.degree, "Nedelec degree k")->check(CLI::Range(1, 4));
  run->add_option("--aux-degree", cfg.aux_degree, "Equilibration degree k' (default k)")->check(CLI::Range(0, 4));
  run->add_option("--mode", mode, "uniform or adaptive")->check(CLI::IsMember({"uniform", "adaptive"}));
  run->add_option("--levels,--max-levels", cfg.max_levels, "Number of levels")->check(CLI::PositiveNumber);
  run->add_option("--theta", cfg.theta, "Doerfler bulk parameter")->check(CLI::Range(0.0, 1.0));
  run->add_option("--estimator", estimator, "Marking estimator")->check(CLI::IsMember({"eq", "res", "both"}));
  run->add_flag("--strict-a2", cfg.strict_a2, "Project j onto D_k' and enforce compatibility");
  run->add_option("--out", ecfg.out_dir, "Output directory");
  run->add_flag("--vtk", ecfg.write_vtk, "Write mesh_level_<i>.vtk with per-tet indicators");
  auto* th = run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--sequential", sequential, "Single-threaded bit-reproducible mode")->excludes(th);
  run->add_option("--max-dofs", cfg.max_dofs, "Stop once a level has this many dofs");
  run->add_option("--n", cfg.initial_n, "Resolution of the first mesh")->check(CLI::PositiveNumber);
  run->add_option("--face-mode", face_mode, "Face solve: weak or strong")->check(CLI::IsMember({"weak", "strong"}));
  run->add_option("--backend", backend, "Linear solver")->check(CLI::IsMember({"direct", "cg"}));
  run->add_option("--tol", cfg.solver.tol, "Relative solver tolerance");
  run->add_option("--max-iter", cfg.solver.max_iter, "CG iteration cap");
  run->add_option("--reference-levels", cfg.reference_levels,
                  "Extra adaptive levels for a reference solution when no exact field is trusted");
  run->add_option("--export-matrix", matrix_path, "Write the first curl-curl matrix in Matrix Market format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is invalid input.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& p : builtin_problems()) std::printf("%-22s %s\n", p.name.c_str(), p.description.c_str());
      return 0;
    }
    cfg.mode = mode == "uniform" ? RefinementMode::Uniform : RefinementMode::Adaptive;
    static const std::map<std::string, EstimatorChoice> est = {
        {"eq", EstimatorChoice::Equilibrated}, {"res", EstimatorChoice::Residual}, {"both", EstimatorChoice::Both}};
    cfg.estimator = est.at(estimator);
    cfg.face_mode = face_mode == "strong" ? FaceSolveMode::Strong : FaceSolveMode::Weak;
    cfg.solver.backend = backend == "cg" ? SolverBackend::CG : SolverBackend::Direct;
    cfg.exec.threads = sequential ? 1 : threads;
    cfg.validate();

    const ProblemSpec spec = problem_by_name(problem);
    if (!matrix_path.empty()) export_matrix(spec, cfg, matrix_path);
    const ExperimentReport report = run_experiment(spec, ecfg);
    print_rows(report);
    for (const auto& f : report.failures) std::fprintf(stderr, "invariant: %s\n", f.c_str());
    if (!report.error_code.empty()) {
      std::fprintf(stderr, "error: %s: %s\n", report.error_code.c_str(), report.error_message.c_str());
    }
    return report.ok() ? 0 : 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
