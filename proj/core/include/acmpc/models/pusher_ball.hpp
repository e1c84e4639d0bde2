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

#ifndef ACMPC_MODELS_PUSHER_BALL_HPP_
#define ACMPC_MODELS_PUSHER_BALL_HPP_

#include <memory>

#include <Eigen/Core>

#include "acmpc/models/rigid_body.hpp"

namespace acmpc::models {

// Top-down planar pushing: an actuated point finger and a ball sliding on a
// table. q = [finger_x, finger_y, ball_x, ball_y], u = finger force.
struct PusherBallParams {
  double finger_mass = 0.1;
  double ball_mass = 0.05;
  double radius_true = 0.03;
  double radius_prior = 0.035;
  // Viscous table drag on the ball and on the finger, N s / m.
  double ball_damping = 0.2;
  double finger_damping = 1.0;
  double friction = 0.5;
  int num_edges = 2;
  double dt = 0.01;

  void Validate() const;
};

class PusherBallModel final : public RigidBodyModel {
 public:
  PusherBallModel(const PusherBallParams& params, double radius);

  int num_positions() const override { return 4; }
  int num_inputs() const override { return 2; }
  int num_contacts() const override { return 1; }
  int num_edges() const override { return 2; }
  double timestep() const override { return params_.dt; }

  Eigen::MatrixXd MassMatrix(const Eigen::VectorXd& q) const override;
  Eigen::VectorXd Bias(const Eigen::VectorXd& q,
                       const Eigen::VectorXd& v) const override;
  Eigen::MatrixXd InputMap(const Eigen::VectorXd& q) const override;
  Eigen::VectorXd Gap(const Eigen::VectorXd& q) const override;
  Eigen::MatrixXd NormalJacobian(const Eigen::VectorXd& q) const override;
  Eigen::MatrixXd TangentJacobian(const Eigen::VectorXd& q) const override;
  Eigen::VectorXd Friction() const override;

  double radius() const { return radius_; }
  const PusherBallParams& params() const { return params_; }

 private:
  // Unit vector from ball to finger.
  Eigen::Vector2d Normal(const Eigen::VectorXd& q) const;

  PusherBallParams params_;
  double radius_;
};

struct PusherBallPair {
  std::shared_ptr<const PusherBallModel> truth;
  std::shared_ptr<const PusherBallModel> prior;
};

PusherBallPair PusherBallPlant(const PusherBallParams& p);

}  // namespace acmpc::models

#endif  // ACMPC_MODELS_PUSHER_BALL_HPP_
