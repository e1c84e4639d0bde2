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

#ifndef ACMPC_TESTS_SUPPORT_TEST_MODELS_HPP_
#define ACMPC_TESTS_SUPPORT_TEST_MODELS_HPP_

#include <cmath>

#include <Eigen/Core>

#include "acmpc/models/rigid_body.hpp"

namespace acmpc::testing {

// Planar point mass above flat ground under gravity, directly actuated.
// q = [x, y], gap = y - radius. Every term is affine, so its LCS
// linearization is globally exact.
class GroundBall : public models::RigidBodyModel {
 public:
  GroundBall(double mass = 0.1, double mu = 0.5, double dt = 0.01)
      : mass_(mass), mu_(mu), dt_(dt) {}

  int num_positions() const override { return 2; }
  int num_inputs() const override { return 2; }
  int num_contacts() const override { return 1; }
  int num_edges() const override { return 2; }
  double timestep() const override { return dt_; }
  Eigen::MatrixXd MassMatrix(const Eigen::VectorXd&) const override {
    return mass_ * Eigen::MatrixXd::Identity(2, 2);
  }
  Eigen::VectorXd Bias(const Eigen::VectorXd&, const Eigen::VectorXd&) const override {
    return Eigen::Vector2d(0.0, mass_ * kGravity);
  }
  Eigen::MatrixXd InputMap(const Eigen::VectorXd&) const override {
    return Eigen::MatrixXd::Identity(2, 2);
  }
  Eigen::VectorXd Gap(const Eigen::VectorXd& q) const override {
    return Eigen::VectorXd::Constant(1, q(1) - kRadius);
  }
  Eigen::MatrixXd NormalJacobian(const Eigen::VectorXd&) const override {
    return Eigen::RowVector2d(0.0, 1.0);
  }
  Eigen::MatrixXd TangentJacobian(const Eigen::VectorXd&) const override {
    Eigen::MatrixXd J(2, 2);
    J << 1.0, 0.0, -1.0, 0.0;
    return J;
  }
  Eigen::VectorXd Friction() const override {
    return Eigen::VectorXd::Constant(1, mu_);
  }

  double mass() const { return mass_; }
  static constexpr double kGravity = 9.81;
  static constexpr double kRadius = 0.05;

 private:
  double mass_;
  double mu_;
  double dt_;
};

// GroundBall with a smooth nonlinear force field: a pendulum-like restoring
// term in x and velocity-dependent drag. Contact geometry and mass stay
// constant, so the linearization error is purely second order.
class NonlinearGroundBall : public GroundBall {
 public:
  using GroundBall::GroundBall;
  Eigen::VectorXd Bias(const Eigen::VectorXd& q,
                       const Eigen::VectorXd& v) const override {
    return Eigen::Vector2d(
        2.0 * std::sin(3.0 * q(0)) + 0.3 * v(0) * v(0) + 0.2 * v(1) * v(1),
        mass() * kGravity + 0.5 * std::cos(2.0 * q(0)) * v(1) + 0.1 * q(1) * q(1));
  }
};

}  // namespace acmpc::testing

#endif  // ACMPC_TESTS_SUPPORT_TEST_MODELS_HPP_
