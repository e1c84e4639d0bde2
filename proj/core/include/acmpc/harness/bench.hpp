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

#ifndef ACMPC_HARNESS_BENCH_HPP_
#define ACMPC_HARNESS_BENCH_HPP_

#include <string>
#include <vector>

#include "acmpc/harness/config.hpp"

namespace acmpc::harness {

struct TimingStats {
  std::string name;
  int count = 0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
  double max_ms = 0.0;
  double target_ms = 0.0;
  // Inner iterations per call; constant for a fixed config.
  int iterations_per_call = 0;

  bool meets_target() const { return count > 0 && p95_ms <= target_ms; }
};

struct BenchReport {
  ExperimentId experiment = ExperimentId::kCartpoleWalls;
  TimingStats c3_solve;
  TimingStats adapt_update;
};

inline constexpr double kAdaptTargetMs = 50.0;
inline constexpr double kSolveTargetMs = 12.5;

// Runs the deterministic closed loop long enough for `calls` learner updates
// after the buffer fills, timing each from inside the loop. Every solve of the
// run is timed, so the solve sample holds at least `calls` entries.
BenchReport RunBench(const ExperimentConfig& cfg, int calls = 1000);

std::string FormatBenchReport(const BenchReport& report);
std::string BenchReportJson(const BenchReport& report, int indent = 2);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_BENCH_HPP_
