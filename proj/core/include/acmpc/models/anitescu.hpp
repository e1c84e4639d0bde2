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

#ifndef ACMPC_MODELS_ANITESCU_HPP_
#define ACMPC_MODELS_ANITESCU_HPP_

#include <Eigen/Core>

#include "acmpc/lcs/lcs.hpp"
#include "acmpc/models/rigid_body.hpp"

namespace acmpc::models {

// Regularization added to the contact LCP matrix.
inline constexpr double kDefaultContactRegularization = 1e-4;
// Central-difference step for the smooth-dynamics Jacobian.
inline constexpr double kJacobianStep = 1e-6;

struct AnitescuOptions {
  double eps_c = kDefaultContactRegularization;
  double fd_step = kJacobianStep;
};

struct AnitescuResult {
  Eigen::VectorXd q_next;
  Eigen::VectorXd v_next;
  Eigen::VectorXd lambda;
  // LCP data of the step, kept for diagnostics and tests.
  Eigen::VectorXd lcp_q;
  Eigen::MatrixXd lcp_F;
};

// Semi-implicit step
//   v+ = v + M^-1 (dt (B u - C) + J_c' lambda),  q+ = q + dt v+
//   0 <= lambda _|_ E_t' phi / dt + J_c v+ + eps_c lambda >= 0.
// Throws lcs::SteppingError if the LCP fails.
AnitescuResult AnitescuStep(const RigidBodyModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                            const AnitescuOptions& opts = {});

// Same step on a stacked state x = [q; v].
Eigen::VectorXd AnitescuStepState(const RigidBodyModel& model,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u,
                                  const AnitescuOptions& opts = {});

// Smooth-dynamics Jacobian [df/dq, df/dv, df/du] by central differences.
Eigen::MatrixXd DynamicsJacobian(const RigidBodyModel& model,
                                 const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& u, double h);

// Local LCS about (x*, u*) with contact geometry frozen at q*. Exact at the
// nominal point. Throws ModelError if M(q*) is singular.
lcs::LcsParams Linearize(const RigidBodyModel& model, const Eigen::VectorXd& x_star,
                         const Eigen::VectorXd& u_star,
                         const AnitescuOptions& opts = {});

}  // namespace acmpc::models

#endif  // ACMPC_MODELS_ANITESCU_HPP_
