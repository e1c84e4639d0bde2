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

#ifndef ACMPC_LCS_LCS_HPP_
#define ACMPC_LCS_LCS_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace acmpc::lcs {

// Local hybrid model
//   x+ = A x + B u + D lambda + d
//   0 <= lambda  _|_  E x + F lambda + H u + c >= 0
struct LcsParams {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd D;
  Eigen::VectorXd d;
  Eigen::MatrixXd E;
  Eigen::MatrixXd F;
  Eigen::MatrixXd H;
  Eigen::VectorXd c;

  int num_states() const { return static_cast<int>(A.rows()); }
  int num_inputs() const { return static_cast<int>(B.cols()); }
  int num_contacts() const { return static_cast<int>(F.rows()); }

  // Throws std::invalid_argument naming the first inconsistent block.
  void Validate() const;

  // Smallest eigenvalue of F + F'. Equals sigma_min(F + F') when positive and
  // is negative when F + F' is indefinite.
  double ConvexityMargin() const;

  // Copy with c replaced by c + r.
  LcsParams WithShiftedC(const Eigen::VectorXd& r) const;

  static LcsParams Zero(int nx, int nu, int nlambda);
};

bool operator==(const LcsParams& a, const LcsParams& b);

// Learned constant offset on the complementarity rows.
struct Residual {
  Eigen::VectorXd r_comp;

  static Residual Zero(int nlambda) {
    return Residual{Eigen::VectorXd::Zero(nlambda)};
  }
  int size() const { return static_cast<int>(r_comp.size()); }
};

struct LcsState {
  Eigen::VectorXd x;
  std::int64_t k = 0;
};

struct StepResult {
  LcsState next;
  Eigen::VectorXd lambda;
};

// Raised when the contact LCP of a step cannot be solved. Carries the data
// needed to reproduce the failure.
class SteppingError : public std::runtime_error {
 public:
  SteppingError(const std::string& what, Eigen::VectorXd x, Eigen::VectorXd u,
                Eigen::VectorXd q_vec, int index = -1);

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& u() const { return u_; }
  const Eigen::VectorXd& q_vec() const { return q_vec_; }
  // Rollout step that failed, -1 for a single step.
  int index() const { return index_; }

 private:
  Eigen::VectorXd x_;
  Eigen::VectorXd u_;
  Eigen::VectorXd q_vec_;
  int index_;
};

// Offset c + r used by every complementarity evaluation. Stepping (theta, r)
// and (theta with c <- c + r, 0) therefore produce identical bits.
Eigen::VectorXd EffectiveOffset(const LcsParams& theta, const Residual& r);

// E x + H u + (c + r).
Eigen::VectorXd ComplementarityOffset(const LcsParams& theta,
                                      const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& u,
                                      const Residual& r);

// Solves LCP(E x + H u + c + r, F) with the QP route when F is symmetric
// positive definite and Lemke otherwise, then applies the linear dynamics.
StepResult LcsStep(const LcsState& x, const Eigen::VectorXd& u,
                   const LcsParams& theta, const Residual& r);

struct Trajectory {
  std::vector<Eigen::VectorXd> states;   // inputs.size() + 1
  std::vector<Eigen::VectorXd> forces;   // inputs.size()
};

Trajectory Rollout(const LcsState& x0, const std::vector<Eigen::VectorXd>& inputs,
                   const LcsParams& theta, const Residual& r);

}  // namespace acmpc::lcs

#endif  // ACMPC_LCS_LCS_HPP_
