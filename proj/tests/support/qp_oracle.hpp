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

#ifndef ACMPC_TESTS_SUPPORT_QP_ORACLE_HPP_
#define ACMPC_TESTS_SUPPORT_QP_ORACLE_HPP_

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace acmpc::testing {

// Minimizer of 0.5 z'Hz + g'z over z >= 0 for SPD H, by enumerating every
// pattern of coordinates pinned at zero and keeping the one that satisfies
// the KKT conditions. Exponential; n <= 10.
inline std::optional<Eigen::VectorXd> EnumerateNonNegativeQp(
    const Eigen::MatrixXd& H, const Eigen::VectorXd& g, double tol = 1e-9) {
  const int n = static_cast<int>(g.size());
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) free_idx.push_back(i);
    }
    Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
    const int k = static_cast<int>(free_idx.size());
    if (k > 0) {
      Eigen::MatrixXd Hff(k, k);
      Eigen::VectorXd gf(k);
      for (int a = 0; a < k; ++a) {
        gf(a) = g(free_idx[a]);
        for (int b = 0; b < k; ++b) Hff(a, b) = H(free_idx[a], free_idx[b]);
      }
      const Eigen::VectorXd zf = Hff.fullPivLu().solve(-gf);
      for (int a = 0; a < k; ++a) z(free_idx[a]) = zf(a);
    }
    const Eigen::VectorXd grad = H * z + g;
    const double scale = std::max(1.0, grad.cwiseAbs().maxCoeff());
    bool ok = z.minCoeff() >= -tol;
    for (int i = 0; i < n && ok; ++i) {
      if (!(mask & (1u << i)) && grad(i) < -tol * scale) ok = false;
    }
    if (ok) return z.cwiseMax(0.0);
  }
  return std::nullopt;
}

}  // namespace acmpc::testing

#endif  // ACMPC_TESTS_SUPPORT_QP_ORACLE_HPP_
