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

#ifndef ACMPC_TESTS_SUPPORT_LQ_ORACLE_HPP_
#define ACMPC_TESTS_SUPPORT_LQ_ORACLE_HPP_

#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace acmpc::testing {

struct LqSolution {
  std::vector<Eigen::VectorXd> x;  // N + 1
  std::vector<Eigen::VectorXd> u;  // N
  double cost = 0.0;
};

// Finite-horizon tracking LQ by backward Riccati recursion:
//   min sum_{k<N} |x_k - ref|_Q^2 + |u_k|_R^2 + |x_N - ref|_QN^2
//   s.t. x_{k+1} = A x_k + B u_k + d.
// Value function V_k(x) = x'P_k x + 2 p_k'x + const, policy u = -K x - f.
inline LqSolution FiniteHorizonLq(const Eigen::MatrixXd& A,
                                  const Eigen::MatrixXd& B,
                                  const Eigen::VectorXd& d,
                                  const Eigen::MatrixXd& Q,
                                  const Eigen::MatrixXd& R,
                                  const Eigen::MatrixXd& QN,
                                  const Eigen::VectorXd& ref, int N,
                                  const Eigen::VectorXd& x0) {
  std::vector<Eigen::MatrixXd> K(N);
  std::vector<Eigen::VectorXd> f(N);
  Eigen::MatrixXd P = QN;
  Eigen::VectorXd p = -QN * ref;
  for (int k = N - 1; k >= 0; --k) {
    const Eigen::MatrixXd S = R + B.transpose() * P * B;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(S);
    K[k] = ldlt.solve(B.transpose() * P * A);
    f[k] = ldlt.solve(B.transpose() * (P * d + p));
    const Eigen::MatrixXd Acl = A - B * K[k];
    const Eigen::VectorXd dcl = d - B * f[k];
    const Eigen::MatrixXd Pn = Q + K[k].transpose() * R * K[k] + Acl.transpose() * P * Acl;
    const Eigen::VectorXd pn =
        -Q * ref + K[k].transpose() * R * f[k] + Acl.transpose() * (P * dcl + p);
    P = 0.5 * (Pn + Pn.transpose());
    p = pn;
  }
  LqSolution sol;
  sol.x.push_back(x0);
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd& x = sol.x.back();
    sol.u.push_back(-K[k] * x - f[k]);
    const Eigen::VectorXd e = x - ref;
    sol.cost += e.dot(Q * e) + sol.u.back().dot(R * sol.u.back());
    sol.x.push_back(A * x + B * sol.u.back() + d);
  }
  const Eigen::VectorXd e = sol.x.back() - ref;
  sol.cost += e.dot(QN * e);
  return sol;
}

}  // namespace acmpc::testing

#endif  // ACMPC_TESTS_SUPPORT_LQ_ORACLE_HPP_
