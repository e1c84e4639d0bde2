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

#ifndef ACMPC_C3_LQ_HPP_
#define ACMPC_C3_LQ_HPP_

#include <Eigen/Core>

namespace acmpc::c3 {

// Stabilizing solution P of P = Q + A'PA - A'PB (R + B'PB)^-1 B'PA by
// fixed-point iteration. Throws std::runtime_error if it does not converge.
Eigen::MatrixXd SolveDare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          int max_iterations = 100000, double tol = 1e-10);

// Infinite-horizon LQR gain K (u = -K x) from the DARE solution.
Eigen::MatrixXd LqrGain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& R, const Eigen::MatrixXd& P);

}  // namespace acmpc::c3

#endif  // ACMPC_C3_LQ_HPP_
