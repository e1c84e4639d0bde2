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

#ifndef ACMPC_MODELS_CARTPOLE_WALLS_HPP_
#define ACMPC_MODELS_CARTPOLE_WALLS_HPP_

#include <Eigen/Core>

#include "acmpc/lcs/lcs.hpp"

namespace acmpc::models {

// Cart-pole linearized about upright with two soft walls acting on the pole
// tip. State [x_cart, theta, x_cart_dot, theta_dot]; the tip sits at
// x_cart - l theta. Wall 0 is on the +x side, wall 1 on the -x side.
struct CartpoleWallsParams {
  double cart_mass = 0.978;
  double pole_mass = 0.35;
  double pole_length = 0.6;
  double wall_stiffness = 100.0;
  Eigen::Vector2d wall_offsets{0.35, 0.35};
  double gravity = 9.81;
  double dt = 0.01;
  // Added to the prior c to obtain the true c.
  Eigen::Vector2d delta_phi = Eigen::Vector2d::Zero();

  void Validate() const;
};

struct CartpoleLcsPair {
  lcs::LcsParams truth;
  lcs::LcsParams prior;
};

CartpoleLcsPair CartpoleWallsLcs(const CartpoleWallsParams& p);

// Signed distance from the pole tip to each wall under c (c + E x).
Eigen::Vector2d CartpoleWallGaps(const lcs::LcsParams& theta,
                                 const Eigen::VectorXd& x);

}  // namespace acmpc::models

#endif  // ACMPC_MODELS_CARTPOLE_WALLS_HPP_
