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

#ifndef ACMPC_HARNESS_EXPERIMENT_HPP_
#define ACMPC_HARNESS_EXPERIMENT_HPP_

#include <memory>

#include <Eigen/Core>

#include "acmpc/adapt/buffer.hpp"
#include "acmpc/harness/config.hpp"
#include "acmpc/lcs/lcs.hpp"

namespace acmpc::harness {

struct PlantStep {
  Eigen::VectorXd x_next;
  Eigen::VectorXd lambda;
};

// Ground truth. Only the plant step of the closed loop calls into it.
class Plant {
 public:
  virtual ~Plant() = default;
  virtual PlantStep Step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) = 0;
};

// Everything the controller and learner may know. Built from a config whose
// truth fields have been overwritten (see StripTruth).
class ModelSide {
 public:
  virtual ~ModelSide() = default;
  // Local LCS handed to C3 at the observed state and previous input.
  virtual lcs::LcsParams Linearize(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& u) const = 0;
  virtual adapt::Linearizer LearnerLinearizer() const = 0;
  // MPC target for the control period starting at `step`.
  virtual Eigen::VectorXd Reference(std::int64_t step, const Eigen::VectorXd& x_obs,
                                    const lcs::Residual& r) const = 0;
};

// Copy of cfg with the true plant parameters replaced by prior ones.
ExperimentConfig StripTruth(const ExperimentConfig& cfg);

std::unique_ptr<Plant> MakePlant(const ExperimentConfig& cfg);
// Reads only StripTruth(cfg).
std::unique_ptr<ModelSide> MakeModelSide(const ExperimentConfig& cfg);

// MpcConfig with Q_N filled in from the prior model when requested.
c3::MpcConfig ResolveMpcConfig(const ExperimentConfig& cfg);

// Complementarity offset between the true and prior pusher-ball models,
// c_true - c_prior, at a touching configuration. Both edge rows carry the
// normal gap shift.
Eigen::VectorXd PusherGapShift(const models::PusherBallParams& p);

// Residual the learner should reach: delta_phi (cart-pole) or the gap shift
// (pusher-ball). Evaluation only.
Eigen::VectorXd ResidualTarget(const ExperimentConfig& cfg);

// Point on the commanded pushing path after `s` meters.
Eigen::Vector2d PathPoint(const ExperimentConfig& cfg, double s);
Eigen::Vector2d PathTangent(const ExperimentConfig& cfg);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_EXPERIMENT_HPP_
