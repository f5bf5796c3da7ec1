// Copyright 2026 The ndeq Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "ndeq/experiment.hpp"
#include "support/exact_sequence.hpp"
#include "support/local_oracles.hpp"

using namespace ndeq;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct RunKey {
  std::string problem;
  int degree;
  int aux;
  bool strict;
  RefinementMode mode;
  int initial_n;
  int levels;
  auto tie() const { return std::tie(problem, degree, aux, strict, mode, initial_n, levels); }
  bool operator<(const RunKey& o) const { return tie() < o.tie(); }
  std::string label() const {
    std::ostringstream s;
    s << problem << " k=" << degree << " k'=" << (aux > 0 ? aux : degree) << (strict ? " strict" : "") << " "
      << to_string(mode) << " n0=" << initial_n;
    return s.str();
  }
};

ExperimentConfig config_for(const RunKey& key) {
  ExperimentConfig cfg;
  cfg.adapt.degree = key.degree;
  cfg.adapt.aux_degree = key.aux;
  cfg.adapt.strict_a2 = key.strict;
  cfg.adapt.mode = key.mode;
  cfg.adapt.initial_n = key.initial_n;
  cfg.adapt.max_levels = key.levels;
  cfg.adapt.estimator = EstimatorChoice::Both;
  return cfg;
}

class RunCache {
 public:
  const ExperimentReport& get(const RunKey& key) {
    auto it = runs_.find(key);
    if (it != runs_.end()) return it->second;
    auto report = run_experiment(problem_by_name(key.problem), config_for(key));
    if (!report.ok()) {
      std::fprintf(stderr, "run %s did not complete cleanly: %s %s\n", key.label().c_str(),
                   report.error_code.c_str(), report.error_message.c_str());
      for (const auto& f : report.failures) std::fprintf(stderr, "  invariant: %s\n", f.c_str());
    }
    return runs_.emplace(key, std::move(report)).first->second;
  }
  const std::map<RunKey, ExperimentReport>& all() const { return runs_; }

 private:
  std::map<RunKey, ExperimentReport> runs_;
};

RunKey uniform_cube(int k, int n0, int levels, int aux = 0, bool strict = false) {
  return {"cube_poly", k, aux, strict, RefinementMode::Uniform, n0, levels};
}

// Uniform cube_poly meshes per degree: k=1 on n=2,4,8, higher degrees on n=1,2,4.
RunKey rate_run(int k) { return k == 1 ? uniform_cube(1, 2, 3) : uniform_cube(k, 1, 3); }

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail_if(bool bad, const std::string& why) {
    if (bad) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + why;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

bool completed(const ExperimentReport& r, Verdict& v, const std::string& label) {
  if (r.ok()) return true;
  v.fail_if(true, label + " failed: " + (r.error_code.empty() ? r.failures.front() : r.error_code));
  return false;
}

Verdict criterion1(RunCache& cache) {
  Verdict v;
  const auto t0 = clock_type::now();
  for (int k = 1; k <= 2; ++k) {
    const auto& r = cache.get(rate_run(k));
    if (!completed(r, v, rate_run(k).label())) continue;
    std::string rates;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      const double rate = std::log2(r.rows[i - 1].error / r.rows[i].error);
      rates += (i > 1 ? "," : "") + fmt("%.3f", rate);
      v.fail_if(std::abs(rate - k) > 0.3, "k=" + std::to_string(k) + " rate " + fmt("%.3f", rate));
    }
    v.note("k=" + std::to_string(k) + " rates " + rates);
  }
  const double secs = seconds_since(t0);
  v.fail_if(secs >= 300.0, "runtime " + fmt("%.1f", secs) + " s");
  return v;
}

Verdict criterion2(RunCache& cache) {
  Verdict v;
  double lo = 1e300, hi = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const auto& r = cache.get(rate_run(k));
    if (!completed(r, v, rate_run(k).label())) continue;
    for (const auto& row : r.rows) {
      lo = std::min(lo, row.eff_eq);
      hi = std::max(hi, row.eff_eq);
      v.fail_if(!(row.eff_eq >= 0.99 && row.eff_eq <= 2.5),
                "k=" + std::to_string(k) + " level " + std::to_string(row.level) + " eff_eq " + fmt("%.4f", row.eff_eq));
    }
  }
  v.note("eff_eq in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "]");
  double strict_lo = 1e300;
  for (int k = 1; k <= 2; ++k) {
    const auto key = uniform_cube(k, 1, 3, 0, true);
    const auto& r = cache.get(key);
    if (!completed(r, v, key.label())) continue;
    for (const auto& row : r.rows) {
      strict_lo = std::min(strict_lo, row.eff_eq);
      v.fail_if(!(row.eff_eq >= 1.0 - 1e-6 && row.eff_eq <= 2.5),
                "strict k=" + std::to_string(k) + " level " + std::to_string(row.level) + " eff_eq " +
                    fmt("%.10f", row.eff_eq));
    }
  }
  v.note("strict min eff_eq " + fmt("%.12f", strict_lo));
  return v;
}

Verdict criterion3(RunCache& cache) {
  Verdict v;
  const std::vector<RunKey> keys = {uniform_cube(3, 1, 3, 3), uniform_cube(1, 1, 3, 0, true),
                                    uniform_cube(2, 1, 3, 0, true)};
  double el = 0.0, fa = 0.0;
  for (const auto& key : keys) {
    const auto& r = cache.get(key);
    if (!completed(r, v, key.label())) continue;
    for (const auto& row : r.rows) {
      v.fail_if(!row.a2, key.label() + " lacks A2");
      el = std::max(el, row.eq_element_relative);
      fa = std::max(fa, row.eq_face_relative);
      v.fail_if(!(row.eq_element_relative <= 1e-9 && row.eq_face_relative <= 1e-9),
                key.label() + " level " + std::to_string(row.level) + " residuals " +
                    fmt("%.2e", row.eq_element_relative) + "/" + fmt("%.2e", row.eq_face_relative));
    }
  }
  v.note("max element " + fmt("%.2e", el) + ", max face " + fmt("%.2e", fa));
  return v;
}

// Evaluated over every run the driver made with the equilibrated estimator.
Verdict criterion4(const RunCache& cache) {
  Verdict v;
  int runs = 0;
  std::vector<std::string> failing;
  double worst_rel = 0.0, worst_var = 0.0;
  std::string worst_run;
  for (const auto& [key, r] : cache.all()) {
    bool bad = false;
    bool any = false;
    for (const auto& row : r.rows) {
      if (std::isnan(row.max_re)) continue;
      any = true;
      const double rel = row.max_re / row.lambda_max;
      const double var = row.max_re_variation / row.lambda_max;
      if (rel > worst_rel) {
        worst_rel = rel;
        worst_run = key.label();
      }
      worst_var = std::max(worst_var, var);
      if (!(row.max_re <= 1e-9 * row.lambda_max && row.max_re_variation <= 1e-9 * row.lambda_max)) bad = true;
    }
    if (!any) continue;
    ++runs;
    if (bad) failing.push_back(key.label() + (r.rows.front().a2 ? "" : " (no A2)"));
  }
  v.fail_if(runs == 0, "no equilibrated runs");
  std::string names;
  for (const auto& f : failing) names += (names.empty() ? "" : ", ") + f;
  v.fail_if(!failing.empty(), std::to_string(failing.size()) + " of " + std::to_string(runs) +
                                  " runs exceed 1e-9 max|lambda|: " + names);
  v.note("worst |r_e|/max|lambda| " + fmt("%.2e", worst_rel) + " (" + worst_run + "), worst variation " +
         fmt("%.2e", worst_var));
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto t0 = clock_type::now();
  std::mt19937_64 rng(20260501);
  double s1 = 0.0, s2 = 0.0;
  for (int kp = 1; kp <= 3; ++kp) {
    const auto o = testing::step1_roundtrip(kp, 200, rng);
    s1 = std::max({s1, o.curl_error, o.orthogonality, o.projection_error, o.energy_excess});
    for (FaceSolveMode mode : {FaceSolveMode::Weak, FaceSolveMode::Strong}) {
      s2 = std::max(s2, testing::step2_roundtrip(kp, 200, mode, rng));
    }
  }
  const double s3 = testing::step3_ring(200, rng);
  const double secs = seconds_since(t0);
  v.fail_if(s1 > 1e-10, "step 1 deviation " + fmt("%.2e", s1));
  v.fail_if(s2 > 1e-10, "step 2 deviation " + fmt("%.2e", s2));
  v.fail_if(s3 > 1e-10, "step 3 deviation " + fmt("%.2e", s3));
  v.fail_if(secs >= 60.0, "runtime " + fmt("%.1f", secs) + " s");
  v.note("step1 " + fmt("%.2e", s1) + ", step2 " + fmt("%.2e", s2) + ", step3 " + fmt("%.2e", s3) + " in " +
         fmt("%.2f", secs) + " s");
  return v;
}

Verdict criterion6() {
  Verdict v;
  std::mt19937_64 rng(606);
  double worst = 0.0;
  for (int kp = 1; kp <= 3; ++kp) {
    const auto r = testing::exact_sequence_residuals(kp, 50, rng);
    const double m = std::max({r.grad_in_curl_space, r.curl_in_div_space, r.div_in_scalars, r.surface_curl,
                               r.surface_kernel});
    v.fail_if(m > 1e-10, "k'=" + std::to_string(kp) + " residual " + fmt("%.2e", m));
    worst = std::max(worst, m);
  }
  v.note("max inclusion residual " + fmt("%.2e", worst));
  return v;
}

Verdict criterion7(RunCache& cache) {
  Verdict v;
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    RunKey key = rate_run(k);
    key.aux = 3;
    const auto& r = cache.get(key);
    if (!completed(r, v, key.label())) continue;
    for (const auto& row : r.rows) {
      worst = std::max(worst, row.pythagoras_defect);
      v.fail_if(!(row.pythagoras_defect <= 1e-6),
                key.label() + " level " + std::to_string(row.level) + " defect " + fmt("%.2e", row.pythagoras_defect));
    }
  }
  v.note("k'=3, max relative defect " + fmt("%.2e", worst));
  return v;
}

Verdict criterion8(RunCache& cache) {
  Verdict v;
  const auto& r = cache.get(rate_run(1));
  if (!completed(r, v, rate_run(1).label())) return v;
  std::string trend;
  for (const auto& row : r.rows) trend += (trend.empty() ? "" : ",") + fmt("%.3f", row.local_efficiency);
  const double ratio = r.rows.back().local_efficiency / r.rows[1].local_efficiency;
  v.fail_if(!(ratio <= 1.5), "growth " + fmt("%.3f", ratio));
  v.note("local efficiency " + trend + ", finest/level 1 = " + fmt("%.3f", ratio));
  return v;
}

Verdict criterion9(RunCache& cache) {
  Verdict v;
  const auto& r1 = cache.get(uniform_cube(1, 1, 3));
  const auto& r3 = cache.get(rate_run(3));
  if (!completed(r1, v, "k=1") || !completed(r3, v, "k=3")) return v;
  std::string pairs;
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    const double a = r1.rows[i].eff_res, b = r3.rows[i].eff_res;
    pairs += (i ? ", " : "") + std::string("n=") + std::to_string(r1.rows[i].resolution) + " " + fmt("%.2f", a) +
             "/" + fmt("%.2f", b);
    v.fail_if(!(b >= 1.2 * a), "n=" + std::to_string(r1.rows[i].resolution) + " eff_res(k=3)/eff_res(k=1) = " +
                                   fmt("%.3f", b / a));
  }
  for (int k = 1; k <= 3; ++k) {
    const auto& r = cache.get(uniform_cube(k, 1, 3));
    if (!completed(r, v, "k=" + std::to_string(k))) continue;
    for (const auto& row : r.rows) {
      v.fail_if(!(row.eff_eq >= 0.99 && row.eff_eq <= 2.5),
                "k=" + std::to_string(k) + " n=" + std::to_string(row.resolution) + " eff_eq " + fmt("%.3f", row.eff_eq));
    }
  }
  v.note("eff_res k=1/k=3: " + pairs);
  return v;
}

Verdict criterion10(RunCache& cache) {
  Verdict v;
  auto check = [&](const RunKey& key, bool strict_decay) {
    const auto& r = cache.get(key);
    if (!completed(r, v, key.label())) return;
    std::string conc;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
      const bool decays = strict_decay ? r.rows[i].eta < r.rows[i - 1].eta : true;
      v.fail_if(!decays, key.label() + " eta rises at level " + std::to_string(i));
    }
    v.fail_if(!(r.rows.back().eta < r.rows.front().eta), key.label() + " eta does not decay");
    for (std::size_t i = 2; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      if (row.marked == 0) continue;  // last level of a loop that stopped early
      const double near = static_cast<double>(row.marked_near_feature) / static_cast<double>(row.tets_near_feature);
      const double all = static_cast<double>(row.marked) / static_cast<double>(row.n_tets);
      conc += (conc.empty() ? "" : ",") + fmt("%.2f", near / all);
      v.fail_if(!(near > all), key.label() + " level " + std::to_string(i) + " not concentrated");
    }
    v.note(key.problem + " eta " + fmt("%.3e", r.rows.front().eta) + "->" + fmt("%.3e", r.rows.back().eta) +
           ", concentration " + conc);
  };
  check({"cube_jump_mu_10", 2, 0, false, RefinementMode::Adaptive, 2, 5}, true);
  check({"cube_jump_mu_100", 2, 0, false, RefinementMode::Adaptive, 2, 5}, true);
  check({"lbrick_singular", 2, 0, false, RefinementMode::Adaptive, 2, 5}, false);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion11() {
  Verdict v;
  const auto base = std::filesystem::temp_directory_path() / "ndeq_acceptance_determinism";
  std::filesystem::remove_all(base);
  const RunKey key{"cube_jump_mu_100", 2, 0, false, RefinementMode::Adaptive, 2, 4};
  std::vector<ExperimentReport> seq;
  for (int i = 0; i < 2; ++i) {
    auto cfg = config_for(key);
    cfg.out_dir = (base / ("seq" + std::to_string(i))).string();
    cfg.write_vtk = true;
    seq.push_back(run_experiment(problem_by_name(key.problem), cfg));
    if (!completed(seq.back(), v, "sequential run")) return v;
  }
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(base / "seq0")) {
    const auto other = base / "seq1" / entry.path().filename();
    if (entry.path().filename() == "report.json") continue;  // carries timings
    ++files;
    v.fail_if(slurp(entry.path()) != slurp(other), entry.path().filename().string() + " differs");
  }
  v.fail_if(report_csv(seq[0]) != report_csv(seq[1]), "csv differs");

  auto cfg = config_for(key);
  cfg.adapt.exec.threads = 4;
  const auto par = run_experiment(problem_by_name(key.problem), cfg);
  if (!completed(par, v, "threaded run")) return v;
  double worst = 0.0;
  v.fail_if(par.rows.size() != seq[0].rows.size(), "threaded run has a different level count");
  for (std::size_t i = 0; i < std::min(par.rows.size(), seq[0].rows.size()); ++i) {
    worst = std::max(worst, std::abs(par.rows[i].eta - seq[0].rows[i].eta) / seq[0].rows[i].eta);
  }
  v.fail_if(worst > 1e-12, "threaded eta deviation " + fmt("%.2e", worst));
  v.note(std::to_string(files) + " output files identical, threaded eta deviation " + fmt("%.2e", worst));
  std::filesystem::remove_all(base);
  return v;
}

}  // namespace

int main() {
  RunCache cache;
  std::vector<std::pair<std::string, Verdict>> results;
  auto record = [&](const std::string& name, Verdict v) { results.emplace_back(name, std::move(v)); };
  const auto t0 = clock_type::now();
  record("convergence rates", criterion1(cache));
  record("efficiency indices", criterion2(cache));
  record("exact equilibrium", criterion3(cache));
  record("local well-posedness oracles", criterion5());
  record("exact sequences", criterion6());
  record("Pythagoras identity", criterion7(cache));
  record("efficiency trend", criterion8(cache));
  record("residual estimator contrast", criterion9(cache));
  record("adaptive behaviour", criterion10(cache));
  record("determinism", criterion11());
  // Edge compatibility covers every run above, so it is evaluated last.
  results.insert(results.begin() + 3, {"edge compatibility", criterion4(cache)});

  int failed = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& [name, v] = results[i];
    std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, name.c_str(), v.detail.c_str());
    if (!v.pass) ++failed;
  }
  std::printf("%d of %zu criteria passed in %.1f s\n", static_cast<int>(results.size()) - failed, results.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
