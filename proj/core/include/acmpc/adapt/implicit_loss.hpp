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

#ifndef ACMPC_ADAPT_IMPLICIT_LOSS_HPP_
#define ACMPC_ADAPT_IMPLICIT_LOSS_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "acmpc/adapt/buffer.hpp"
#include "acmpc/lcs/lcs.hpp"

namespace acmpc::adapt {

class LearnerError : public std::runtime_error {
 public:
  LearnerError(const std::string& what, int entry = -1)
      : std::runtime_error(what), entry_(entry) {}
  // Buffer entry that failed, -1 when not tied to one.
  int entry() const { return entry_; }

 private:
  int entry_;
};

struct LearnConfig {
  double eps = 1e-7;
  double gamma = 1e-2;
  double xi = 1e-3;
  // Prediction-error weight, n_x x n_x. Empty means identity.
  Eigen::MatrixXd Q_d;
  int n_b = 10;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  // KKT tolerance of the inner QP, relative to the problem scale.
  double qp_tol = 1e-8;

  void Validate() const;
  Eigen::MatrixXd PredictionWeight(int n_x) const;
};

// Identity on the velocity half of x = [q; v], zero on positions.
Eigen::MatrixXd VelocityWeight(int n_x, double weight = 1.0);

struct PointLoss {
  double value = 0.0;
  Eigen::VectorXd lambda;
  Eigen::VectorXd eta;
  // d l / d r_comp.
  Eigen::VectorXd gradient;
};

// Implicit loss of one transition:
//   min_{lambda, eta >= 0}  1/2 |D lambda + z|^2_Qd
//       + (1/eps) (lambda' eta + |q + F lambda + r - eta|^2 / (2 gamma))
// with z = A x + B u + d - x_next and q = E x + H u + c. Requires
// 0 < gamma < sigma_min(F + F'), which makes the problem jointly convex.
PointLoss ImplicitLossPoint(const DataPoint& pt, const lcs::LcsParams& theta,
                            const lcs::Residual& r, const LearnConfig& cfg);

struct BufferLoss {
  double value = 0.0;
  Eigen::VectorXd gradient;
};

// Sum of the per-point losses and their gradients. A failing entry raises
// LearnerError carrying its index.
BufferLoss LossAndGradient(const AugmentedBuffer& buffer, const lcs::Residual& r,
                           const LearnConfig& cfg);

Eigen::VectorXd LossGradient(const AugmentedBuffer& buffer, const lcs::Residual& r,
                             const LearnConfig& cfg);

double Loss(const AugmentedBuffer& buffer, const lcs::Residual& r,
            const LearnConfig& cfg);

}  // namespace acmpc::adapt

#endif  // ACMPC_ADAPT_IMPLICIT_LOSS_HPP_
