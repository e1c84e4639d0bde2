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

#ifndef ACMPC_MODELS_RIGID_BODY_HPP_
#define ACMPC_MODELS_RIGID_BODY_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace acmpc::models {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Continuous-time contact model
//   M(q) v' + C(q, v) = B u + J' lambda
// with n_c contacts, gaps phi(q), normal Jacobian J_n (n_c x n_v) and a
// polyhedral friction cone of n_e edges per contact, J_t ((n_e n_c) x n_v),
// rows grouped by contact. Positions and velocities share one coordinate
// system (n_q == n_v).
class RigidBodyModel {
 public:
  virtual ~RigidBodyModel() = default;

  virtual int num_positions() const = 0;
  int num_velocities() const { return num_positions(); }
  virtual int num_inputs() const = 0;
  virtual int num_contacts() const = 0;
  virtual int num_edges() const = 0;
  int num_lambda() const { return num_contacts() * num_edges(); }
  int num_states() const { return 2 * num_positions(); }
  virtual double timestep() const = 0;

  virtual Eigen::MatrixXd MassMatrix(const Eigen::VectorXd& q) const = 0;
  virtual Eigen::VectorXd Bias(const Eigen::VectorXd& q,
                               const Eigen::VectorXd& v) const = 0;
  virtual Eigen::MatrixXd InputMap(const Eigen::VectorXd& q) const = 0;
  virtual Eigen::VectorXd Gap(const Eigen::VectorXd& q) const = 0;
  virtual Eigen::MatrixXd NormalJacobian(const Eigen::VectorXd& q) const = 0;
  virtual Eigen::MatrixXd TangentJacobian(const Eigen::VectorXd& q) const = 0;
  virtual Eigen::VectorXd Friction() const = 0;

  // f(q, v, u) = M^-1 (B u - C).
  Eigen::VectorXd Acceleration(const Eigen::VectorXd& q, const Eigen::VectorXd& v,
                               const Eigen::VectorXd& u) const;
};

// E_t: n_c x (n_e n_c), ones on each contact's edge block.
Eigen::MatrixXd EdgeSelector(int num_contacts, int num_edges);

// J_c = E_t' J_n + mu J_t, one row per friction-cone edge.
Eigen::MatrixXd ContactJacobian(const RigidBodyModel& model,
                                const Eigen::VectorXd& q);

// Splits x = [q; v].
Eigen::VectorXd Positions(const RigidBodyModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd Velocities(const RigidBodyModel& model, const Eigen::VectorXd& x);
Eigen::VectorXd StackState(const Eigen::VectorXd& q, const Eigen::VectorXd& v);

// Largest relative mismatch between the finite-difference rate of the gap
// along v and J_n v.
double GapJacobianError(const RigidBodyModel& model, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& v, double h = 1e-6);

}  // namespace acmpc::models

#endif  // ACMPC_MODELS_RIGID_BODY_HPP_
