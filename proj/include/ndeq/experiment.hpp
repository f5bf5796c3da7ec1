// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "ndeq/adapt.hpp"

namespace ndeq {

struct ExperimentConfig {
  AdaptiveConfig adapt;
  std::string out_dir;  // empty: nothing is written
  bool write_vtk = false;
};

struct ExperimentReport {
  std::string problem;
  ExperimentConfig config;
  std::vector<LevelRecord> rows;
  double consistency_defect = kNaN;
  double divergence_defect = kNaN;
  // Hard-invariant violations and the error that stopped the run, if any.
  std::vector<std::string> failures;
  std::string error_code;
  std::string error_message;
  bool ok() const { return failures.empty() && error_code.empty(); }
};

// Runs the loop, checks the hard invariants and, when out_dir is set, writes
// report.csv, report.json and optionally mesh_level_<i>.vtk. Library errors
// raised during the run are caught and recorded in the report; an output
// directory that cannot be created throws Error(Io) up front.
ExperimentReport run_experiment(const ProblemSpec& spec, const ExperimentConfig& cfg);

// Versioned CSV without timings; identical bytes for identical sequential runs.
std::string report_csv(const ExperimentReport& report);
// Full record with timings and diagnostics.
std::string report_json(const ExperimentReport& report);

}  // namespace ndeq
