// Copyright 2026 The acmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acmpc/harness/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "acmpc/harness/closed_loop.hpp"
#include "json.hpp"

namespace acmpc::harness {
namespace {

TimingStats Stats(const std::string& name, const std::vector<double>& ms, double target,
                  int iterations) {
  TimingStats t;
  t.name = name;
  t.count = static_cast<int>(ms.size());
  t.p50_ms = Percentile(ms, 0.5);
  t.p95_ms = Percentile(ms, 0.95);
  t.max_ms = ms.empty() ? 0.0 : *std::max_element(ms.begin(), ms.end());
  t.target_ms = target;
  t.iterations_per_call = iterations;
  return t;
}

}  // namespace

BenchReport RunBench(const ExperimentConfig& cfg_in, int calls) {
  if (calls < 1) throw ConfigError("bench: calls must be >= 1");
  ExperimentConfig cfg = cfg_in;
  cfg.mode = RunMode::kDeterministic;
  cfg.record_timing = true;
  cfg.adapt = true;
  // The first n_b - 1 updates see a partial buffer; skip them.
  const int warmup = cfg.learn.n_b;
  const int steps = std::max(calls, (calls + warmup) * cfg.adapt_every());
  cfg.duration_s = steps / cfg.control_hz;
  const RunResult run = RunClosedLoop(cfg);

  std::vector<double> solve_ms;
  int admm = -1;
  for (const auto& s : run.solves) {
    if (s.failed) continue;
    solve_ms.push_back(s.solve_ms);
    admm = admm < 0 ? s.admm_iterations : (admm == s.admm_iterations ? admm : 0);
  }
  std::vector<double> update_ms;
  for (std::size_t i = static_cast<std::size_t>(warmup); i < run.updates.size(); ++i) {
    if (!run.updates[i].failed) update_ms.push_back(run.updates[i].update_ms);
  }
  BenchReport report;
  report.experiment = cfg.experiment;
  report.c3_solve = Stats("c3_solve", solve_ms, kSolveTargetMs, admm);
  report.adapt_update = Stats("adapt_update", update_ms, kAdaptTargetMs, cfg.learn.n_b);
  return report;
}

std::string FormatBenchReport(const BenchReport& report) {
  std::ostringstream os;
  os << "experiment " << ToString(report.experiment) << '\n';
  for (const TimingStats* t : {&report.c3_solve, &report.adapt_update}) {
    char line[256];
    std::snprintf(line, sizeof(line),
                  "%-13s n=%-5d p50=%8.3f ms  p95=%8.3f ms  max=%8.3f ms  "
                  "target p95<=%.1f ms  %s  (%d inner iterations/call)\n",
                  t->name.c_str(), t->count, t->p50_ms, t->p95_ms, t->max_ms,
                  t->target_ms, t->meets_target() ? "MET" : "MISSED",
                  t->iterations_per_call);
    os << line;
  }
  return os.str();
}

std::string BenchReportJson(const BenchReport& report, int indent) {
  nlohmann::json j;
  j["experiment"] = ToString(report.experiment);
  for (const TimingStats* t : {&report.c3_solve, &report.adapt_update}) {
    j[t->name] = {{"count", t->count},
                  {"p50_ms", t->p50_ms},
                  {"p95_ms", t->p95_ms},
                  {"max_ms", t->max_ms},
                  {"target_p95_ms", t->target_ms},
                  {"meets_target", t->meets_target()},
                  {"iterations_per_call", t->iterations_per_call}};
  }
  return j.dump(indent);
}

}  // namespace acmpc::harness
