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

#include "acmpc/models/rigid_body.hpp"

#include <algorithm>

#include <Eigen/Cholesky>

namespace acmpc::models {

Eigen::VectorXd RigidBodyModel::Acceleration(const Eigen::VectorXd& q,
                                             const Eigen::VectorXd& v,
                                             const Eigen::VectorXd& u) const {
  const Eigen::LLT<Eigen::MatrixXd> llt(MassMatrix(q));
  if (llt.info() != Eigen::Success) {
    throw ModelError("mass matrix is not positive definite");
  }
  return llt.solve(InputMap(q) * u - Bias(q, v));
}

Eigen::MatrixXd EdgeSelector(int num_contacts, int num_edges) {
  Eigen::MatrixXd Et = Eigen::MatrixXd::Zero(num_contacts, num_contacts * num_edges);
  for (int i = 0; i < num_contacts; ++i) {
    Et.block(i, i * num_edges, 1, num_edges).setOnes();
  }
  return Et;
}

Eigen::MatrixXd ContactJacobian(const RigidBodyModel& model,
                                const Eigen::VectorXd& q) {
  const int nc = model.num_contacts();
  const int ne = model.num_edges();
  const Eigen::VectorXd mu = model.Friction();
  Eigen::MatrixXd Jc = EdgeSelector(nc, ne).transpose() * model.NormalJacobian(q);
  const Eigen::MatrixXd Jt = model.TangentJacobian(q);
  for (int i = 0; i < nc; ++i) {
    Jc.middleRows(i * ne, ne) += mu(i) * Jt.middleRows(i * ne, ne);
  }
  return Jc;
}

Eigen::VectorXd Positions(const RigidBodyModel& model, const Eigen::VectorXd& x) {
  return x.head(model.num_positions());
}

Eigen::VectorXd Velocities(const RigidBodyModel& model, const Eigen::VectorXd& x) {
  return x.tail(model.num_velocities());
}

Eigen::VectorXd StackState(const Eigen::VectorXd& q, const Eigen::VectorXd& v) {
  Eigen::VectorXd x(q.size() + v.size());
  x << q, v;
  return x;
}

double GapJacobianError(const RigidBodyModel& model, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& v, double h) {
  const Eigen::VectorXd rate =
      (model.Gap(q + h * v) - model.Gap(q - h * v)) / (2.0 * h);
  const Eigen::VectorXd predicted = model.NormalJacobian(q) * v;
  const double scale = std::max(1.0, predicted.cwiseAbs().maxCoeff());
  return (rate - predicted).cwiseAbs().maxCoeff() / scale;
}

}  // namespace acmpc::models
