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

#ifndef ACMPC_HARNESS_CLOSED_LOOP_HPP_
#define ACMPC_HARNESS_CLOSED_LOOP_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Core>

#include "acmpc/harness/config.hpp"
#include "acmpc/harness/experiment.hpp"
#include "acmpc/lcs/lcs.hpp"

namespace acmpc::harness {

// FNV-1a over the raw bytes of v.
std::uint64_t Checksum(const Eigen::VectorXd& v);

// Published learner output. Immutable once shared.
struct ResidualSnapshot {
  lcs::Residual r;
  std::uint64_t version = 0;
  std::uint64_t checksum = 0;
  // Loss at the residual the update started from.
  double loss = 0.0;

  static ResidualSnapshot Make(lcs::Residual r, std::uint64_t version, double loss);
};

// Single-writer, last-value-wins exchange of immutable snapshots. The lock
// covers only the pointer copy.
template <typename T>
class SnapshotChannel {
 public:
  void Publish(std::shared_ptr<const T> value) {
    std::lock_guard<std::mutex> lock(mu_);
    value_ = std::move(value);
  }
  std::shared_ptr<const T> Latest() const {
    std::lock_guard<std::mutex> lock(mu_);
    return value_;
  }

 private:
  mutable std::mutex mu_;
  std::shared_ptr<const T> value_;
};

// One row per control period.
struct LogRecord {
  std::int64_t step = 0;
  double t = 0.0;
  double wall_ms = 0.0;
  Eigen::VectorXd x;      // true plant state at the start of the period
  Eigen::VectorXd x_obs;  // what the controller saw
  Eigen::VectorXd u;      // applied input
  Eigen::VectorXd lambda;  // plant contact forces over the period
  Eigen::VectorXd x_d;
  Eigen::VectorXd lambda_d;
  Eigen::VectorXd r;
  double loss = 0.0;
  std::uint64_t residual_version = 0;
  std::uint64_t residual_checksum = 0;
  double solve_ms = 0.0;
  double loop_ms = 0.0;
  bool controller_failed = false;
};

// One row per C3 call.
struct SolveRecord {
  std::int64_t step = 0;
  double solve_ms = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int admm_iterations = 0;
  std::vector<std::uint32_t> engaged_modes;
  Eigen::VectorXd u0;
  bool failed = false;
};

// One row per learner invocation.
struct UpdateRecord {
  std::int64_t index = 0;
  // Newest buffer step seen by the update.
  std::int64_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  Eigen::VectorXd r;
  std::uint64_t version = 0;
  double update_ms = 0.0;
  int skipped = 0;
  bool failed = false;
};

struct RunSummary {
  ExperimentId experiment = ExperimentId::kCartpoleWalls;
  RunMode mode = RunMode::kDeterministic;
  bool adapt = true;
  std::uint64_t seed = 0;
  std::int64_t steps = 0;
  std::int64_t updates = 0;
  std::int64_t controller_failures = 0;
  std::int64_t learner_failures = 0;

  // Cart-pole.
  bool stabilized = false;
  std::int64_t stabilized_step = -1;
  // Pusher-ball.
  double path_progress = 0.0;
  double path_required = 0.0;
  bool path_success = false;

  Eigen::VectorXd residual_final;
  Eigen::VectorXd residual_target;
  // Cart-pole: max-norm hold test. Pusher-ball: relative error of the
  // trailing-window mean.
  bool residual_converged = false;
  std::int64_t residual_converged_update = -1;
  Eigen::VectorXd residual_window_mean;
  double residual_error = 0.0;

  bool success = false;

  double solve_ms_p50 = 0.0;
  double solve_ms_p95 = 0.0;
  double update_ms_p50 = 0.0;
  double update_ms_p95 = 0.0;
};

struct RunResult {
  std::vector<LogRecord> log;
  std::vector<SolveRecord> solves;
  std::vector<UpdateRecord> updates;
  RunSummary summary;
};

// Builds the plant and model side from cfg.
RunResult RunClosedLoop(const ExperimentConfig& cfg);
// Caller-supplied plant and model side (test doubles).
RunResult RunClosedLoop(const ExperimentConfig& cfg, Plant& plant,
                        const ModelSide& model);

// Success flags from the logs.
RunSummary Evaluate(const ExperimentConfig& cfg, const RunResult& run);

// Linear-interpolated percentile, q in [0, 1]. Zero for an empty sample.
double Percentile(std::vector<double> v, double q);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_CLOSED_LOOP_HPP_
