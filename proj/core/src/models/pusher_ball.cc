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

#include "acmpc/models/pusher_ball.hpp"

#include <stdexcept>
#include <string>

namespace acmpc::models {

void PusherBallParams::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("pusher_ball: ") + name +
                                  " must be > 0");
    }
  };
  positive(finger_mass, "finger_mass");
  positive(ball_mass, "ball_mass");
  positive(radius_true, "radius_true");
  positive(radius_prior, "radius_prior");
  positive(dt, "dt");
  if (ball_damping < 0.0 || finger_damping < 0.0 || friction < 0.0) {
    throw std::invalid_argument("pusher_ball: damping and friction must be >= 0");
  }
  if (num_edges != 2) {
    throw std::invalid_argument("pusher_ball: planar contact has num_edges = 2");
  }
}

PusherBallModel::PusherBallModel(const PusherBallParams& params, double radius)
    : params_(params), radius_(radius) {
  params_.Validate();
  if (!(radius > 0.0)) throw std::invalid_argument("pusher_ball: radius must be > 0");
}

Eigen::MatrixXd PusherBallModel::MassMatrix(const Eigen::VectorXd&) const {
  Eigen::Vector4d m(params_.finger_mass, params_.finger_mass, params_.ball_mass,
                    params_.ball_mass);
  return m.asDiagonal();
}

Eigen::VectorXd PusherBallModel::Bias(const Eigen::VectorXd&,
                                      const Eigen::VectorXd& v) const {
  Eigen::Vector4d c;
  c << params_.finger_damping * v.head<2>(), params_.ball_damping * v.tail<2>();
  return c;
}

Eigen::MatrixXd PusherBallModel::InputMap(const Eigen::VectorXd&) const {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 2);
  B.topRows(2).setIdentity();
  return B;
}

Eigen::Vector2d PusherBallModel::Normal(const Eigen::VectorXd& q) const {
  const Eigen::Vector2d rel = q.head<2>() - q.tail<2>();
  const double dist = rel.norm();
  if (dist < 1e-12) return Eigen::Vector2d::UnitX();
  return rel / dist;
}

Eigen::VectorXd PusherBallModel::Gap(const Eigen::VectorXd& q) const {
  return Eigen::VectorXd::Constant(1, (q.head<2>() - q.tail<2>()).norm() - radius_);
}

Eigen::MatrixXd PusherBallModel::NormalJacobian(const Eigen::VectorXd& q) const {
  const Eigen::Vector2d n = Normal(q);
  Eigen::MatrixXd J(1, 4);
  J << n.transpose(), -n.transpose();
  return J;
}

Eigen::MatrixXd PusherBallModel::TangentJacobian(const Eigen::VectorXd& q) const {
  const Eigen::Vector2d n = Normal(q);
  const Eigen::Vector2d t(-n.y(), n.x());
  Eigen::MatrixXd J(2, 4);
  J << t.transpose(), -t.transpose(),
      -t.transpose(), t.transpose();
  return J;
}

Eigen::VectorXd PusherBallModel::Friction() const {
  return Eigen::VectorXd::Constant(1, params_.friction);
}

PusherBallPair PusherBallPlant(const PusherBallParams& p) {
  p.Validate();
  return PusherBallPair{std::make_shared<const PusherBallModel>(p, p.radius_true),
                        std::make_shared<const PusherBallModel>(p, p.radius_prior)};
}

}  // namespace acmpc::models
