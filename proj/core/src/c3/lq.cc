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

#include "acmpc/c3/lq.hpp"

#include <stdexcept>

#include <Eigen/Cholesky>

namespace acmpc::c3 {

Eigen::MatrixXd SolveDare(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                          const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                          int max_iterations, double tol) {
  Eigen::MatrixXd P = Q;
  for (int i = 0; i < max_iterations; ++i) {
    const Eigen::MatrixXd BtP = B.transpose() * P;
    const Eigen::MatrixXd S = R + BtP * B;
    const Eigen::MatrixXd K = S.ldlt().solve(BtP * A);
    Eigen::MatrixXd next = Q + A.transpose() * P * A - (BtP * A).transpose() * K;
    next = 0.5 * (next + next.transpose());
    if (!next.allFinite()) break;
    const double change = (next - P).cwiseAbs().maxCoeff();
    P = std::move(next);
    if (change <= tol * std::max(1.0, P.cwiseAbs().maxCoeff())) return P;
  }
  throw std::runtime_error("DARE iteration did not converge");
}

Eigen::MatrixXd LqrGain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                        const Eigen::MatrixXd& R, const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd BtP = B.transpose() * P;
  return (R + BtP * B).ldlt().solve(BtP * A);
}

}  // namespace acmpc::c3
