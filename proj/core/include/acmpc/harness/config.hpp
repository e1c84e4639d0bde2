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

#ifndef ACMPC_HARNESS_CONFIG_HPP_
#define ACMPC_HARNESS_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "acmpc/adapt/implicit_loss.hpp"
#include "acmpc/c3/c3.hpp"
#include "acmpc/models/cartpole_walls.hpp"
#include "acmpc/models/pusher_ball.hpp"

namespace acmpc::harness {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentId { kCartpoleWalls, kPusherBall };
enum class RunMode { kDeterministic, kRealtime };

std::string ToString(ExperimentId id);
std::string ToString(RunMode mode);

// Periodic velocity kicks applied to the true plant state. Cart-pole only.
struct Disturbances {
  int state_index = 3;
  double amplitude = 0.0;
  double start_s = 1.0;
  double period_s = 1.0;
  double stop_s = 0.0;
  // Flip the sign on every kick.
  bool alternate = true;

  bool enabled() const { return amplitude != 0.0 && stop_s > start_s; }
};

// Straight-line pushing task for the pusher-ball.
struct PushTask {
  double path_length = 0.2;
  double path_speed = 0.04;
  // Heading of the path in the table plane, radians.
  double heading = 0.0;
  // Depth the finger target sits inside the modeled ball surface.
  double push_depth = 0.003;
  // Lateral tolerance; progress stops counting once exceeded.
  double corridor = 0.03;
};

struct SuccessCriteria {
  double state_tol = 0.05;
  int hold_steps = 100;
  double residual_tol = 0.02;
  int hold_updates = 100;
  double path_fraction = 0.25;
  double residual_rel_tol = 0.2;
  // Trailing share of the learner updates averaged for the residual estimate.
  double residual_window = 0.25;
};

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::kCartpoleWalls;

  // Shared model parameters. The plant section overrides delta_phi /
  // radius_true; the prior section holds what the controller may use.
  models::CartpoleWallsParams cartpole;
  models::PusherBallParams pusher;

  adapt::LearnConfig learn;
  c3::MpcConfig mpc;
  // Q_N from the discrete Riccati equation of the prior model.
  bool terminal_from_dare = false;

  double control_hz = 100.0;
  double adapt_hz = 25.0;
  double duration_s = 10.0;

  // Standard deviation per state coordinate; empty means noise-free.
  Eigen::VectorXd noise_std;
  std::uint64_t seed = 1;
  bool adapt = true;
  RunMode mode = RunMode::kDeterministic;

  std::string output_dir = "out";
  // Deterministic runs log timing columns as zero unless this is set.
  bool record_timing = false;

  Eigen::VectorXd x0;
  Disturbances disturbances;
  PushTask task;
  SuccessCriteria success;

  int num_states() const;
  int num_inputs() const;
  int num_lambda() const;
  double dt() const;
  int steps() const;
  // Control periods per learner update, ceil(control_hz / adapt_hz).
  int adapt_every() const;

  // Throws ConfigError.
  void Validate() const;
};

// JSON text; unknown keys are rejected. Throws ConfigError.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::string& path);
std::string ToJson(const ExperimentConfig& cfg, int indent = 2);

// ACMPC_OUT_DIR when set, else the configured directory.
std::string ResolveOutputDir(const ExperimentConfig& cfg);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_CONFIG_HPP_
