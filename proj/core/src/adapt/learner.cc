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

#include "acmpc/adapt/learner.hpp"

#include <chrono>

namespace acmpc::adapt {

UpdateResult AdaptUpdate(const Buffer& buffer, const lcs::Residual& r,
                         const OptimizerState& st, Augmenter& augmenter,
                         const LearnConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  UpdateResult out;
  out.residual = r;
  out.state = st;
  if (buffer.empty()) {
    out.no_op = true;
    return out;
  }
  const AugmentedBuffer aug = augmenter.Augment(buffer);
  out.skipped = aug.skipped;
  if (aug.entries.empty()) {
    out.no_op = true;
    return out;
  }
  const BufferLoss loss = LossAndGradient(aug, r, cfg);
  out.loss = loss.value;
  out.grad_norm = loss.gradient.norm();
  AdamResult step = AdamStep(r, loss.gradient, st, cfg);
  out.residual = std::move(step.residual);
  out.state = std::move(step.state);
  out.update_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return out;
}

}  // namespace acmpc::adapt
