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

#ifndef ACMPC_ADAPT_ADAM_HPP_
#define ACMPC_ADAPT_ADAM_HPP_

#include <cstdint>

#include <Eigen/Core>

#include "acmpc/adapt/implicit_loss.hpp"
#include "acmpc/lcs/lcs.hpp"

namespace acmpc::adapt {

struct OptimizerState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t t = 0;

  static OptimizerState Zero(int n) {
    return OptimizerState{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), 0};
  }
};

struct AdamResult {
  lcs::Residual residual;
  OptimizerState state;
};

// Bias-corrected adaptive-moment step with learning rate cfg.xi.
AdamResult AdamStep(const lcs::Residual& r, const Eigen::VectorXd& grad,
                    const OptimizerState& st, const LearnConfig& cfg);

}  // namespace acmpc::adapt

#endif  // ACMPC_ADAPT_ADAM_HPP_
