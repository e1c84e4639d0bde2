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

#include "acmpc/adapt/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace acmpc::adapt {

AdamResult AdamStep(const lcs::Residual& r, const Eigen::VectorXd& grad,
                    const OptimizerState& st, const LearnConfig& cfg) {
  const auto n = r.r_comp.size();
  if (grad.size() != n || st.m.size() != n || st.v.size() != n) {
    throw std::invalid_argument("AdamStep: dimension mismatch");
  }
  AdamResult out;
  out.state.t = st.t + 1;
  out.state.m = cfg.beta1 * st.m + (1.0 - cfg.beta1) * grad;
  out.state.v = cfg.beta2 * st.v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(out.state.t));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(out.state.t));
  const Eigen::ArrayXd m_hat = out.state.m.array() / c1;
  const Eigen::ArrayXd v_hat = out.state.v.array() / c2;
  out.residual.r_comp =
      r.r_comp.array() - cfg.xi * m_hat / (v_hat.sqrt() + cfg.adam_eps);
  return out;
}

}  // namespace acmpc::adapt
