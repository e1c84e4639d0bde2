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

#ifndef ACMPC_ADAPT_LEARNER_HPP_
#define ACMPC_ADAPT_LEARNER_HPP_

#include <string>

#include "acmpc/adapt/adam.hpp"
#include "acmpc/adapt/buffer.hpp"
#include "acmpc/adapt/implicit_loss.hpp"

namespace acmpc::adapt {

struct UpdateResult {
  lcs::Residual residual;
  OptimizerState state;
  // Loss and gradient at the incoming residual.
  double loss = 0.0;
  double grad_norm = 0.0;
  double update_ms = 0.0;
  int skipped = 0;
  // Empty buffer: inputs returned unchanged.
  bool no_op = false;
};

// One iteration of the learner: augment the buffer, take the loss gradient
// and apply one Adam step.
UpdateResult AdaptUpdate(const Buffer& buffer, const lcs::Residual& r,
                         const OptimizerState& st, Augmenter& augmenter,
                         const LearnConfig& cfg);

}  // namespace acmpc::adapt

#endif  // ACMPC_ADAPT_LEARNER_HPP_
