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

#include "acmpc/models/cartpole_walls.hpp"

#include <stdexcept>

namespace acmpc::models {

void CartpoleWallsParams::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("cartpole: ") + name +
                                  " must be > 0");
    }
  };
  positive(cart_mass, "cart_mass");
  positive(pole_mass, "pole_mass");
  positive(pole_length, "pole_length");
  positive(wall_stiffness, "wall_stiffness");
  positive(wall_offsets(0), "wall_offsets[0]");
  positive(wall_offsets(1), "wall_offsets[1]");
  positive(gravity, "gravity");
  positive(dt, "dt");
  if (!delta_phi.allFinite()) {
    throw std::invalid_argument("cartpole: delta_phi must be finite");
  }
}

CartpoleLcsPair CartpoleWallsLcs(const CartpoleWallsParams& p) {
  p.Validate();
  const double mc = p.cart_mass;
  const double mp = p.pole_mass;
  const double l = p.pole_length;
  const double g = p.gravity;

  // Point-mass pole, small-angle dynamics. A force f on the tip mass leaves
  // the cart acceleration unchanged and adds -f / (l mp) to theta_ddot.
  Eigen::Matrix4d Ac = Eigen::Matrix4d::Zero();
  Ac(0, 2) = 1.0;
  Ac(1, 3) = 1.0;
  Ac(2, 1) = mp * g / mc;
  Ac(3, 1) = (mc + mp) * g / (l * mc);
  Eigen::Vector4d Bc(0.0, 0.0, 1.0 / mc, 1.0 / (l * mc));
  // Wall 0 pushes the tip toward -x, wall 1 toward +x.
  Eigen::Matrix<double, 4, 2> Dc = Eigen::Matrix<double, 4, 2>::Zero();
  Dc(3, 0) = 1.0 / (l * mp);
  Dc(3, 1) = -1.0 / (l * mp);

  lcs::LcsParams prior = lcs::LcsParams::Zero(4, 1, 2);
  prior.A = Eigen::Matrix4d::Identity() + p.dt * Ac;
  prior.B = p.dt * Bc;
  prior.D = p.dt * Dc;
  prior.E << -1.0, l, 0.0, 0.0,
              1.0, -l, 0.0, 0.0;
  prior.F = Eigen::Matrix2d::Identity() / p.wall_stiffness;
  prior.c = p.wall_offsets;

  CartpoleLcsPair out{prior, prior};
  out.truth.c = prior.c + p.delta_phi;
  return out;
}

Eigen::Vector2d CartpoleWallGaps(const lcs::LcsParams& theta,
                                 const Eigen::VectorXd& x) {
  return theta.E * x + theta.c;
}

}  // namespace acmpc::models
