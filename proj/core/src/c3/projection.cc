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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "acmpc/c3/c3.hpp"

namespace acmpc::c3 {

Projection ProjectComplementarity(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& lambda,
                                  const Eigen::VectorXd& u,
                                  const lcs::LcsParams& theta,
                                  const lcs::Residual& r,
                                  const Eigen::VectorXd& weights,
                                  bool fix_state, int mode_cap) {
  const int nx = theta.num_states();
  const int nu = theta.num_inputs();
  const int nl = theta.num_contacts();
  if (x.size() != nx || lambda.size() != nl || u.size() != nu ||
      weights.size() != nx + nl + nu) {
    throw std::invalid_argument("ProjectComplementarity: dimension mismatch");
  }
  if (nl > mode_cap) {
    throw std::invalid_argument("ProjectComplementarity: n_lambda = " +
                                std::to_string(nl) + " exceeds mode cap " +
                                std::to_string(mode_cap));
  }
  if (weights.minCoeff() <= 0.0) {
    throw std::invalid_argument("ProjectComplementarity: weights must be > 0");
  }

  // Free variables y = ([x], lambda, u); s = S y + s0.
  const int xoff = fix_state ? 0 : nx;
  const int n = xoff + nl + nu;
  Eigen::VectorXd t(n);
  Eigen::VectorXd winv(n);
  Eigen::MatrixXd S(nl, n);
  Eigen::VectorXd s0 = lcs::EffectiveOffset(theta, r);
  if (fix_state) {
    s0 += theta.E * x;
  } else {
    t.head(nx) = x;
    winv.head(nx) = weights.head(nx).cwiseInverse();
    S.leftCols(nx) = theta.E;
  }
  t.segment(xoff, nl) = lambda;
  t.tail(nu) = u;
  winv.segment(xoff, nl) = weights.segment(nx, nl).cwiseInverse();
  winv.tail(nu) = weights.tail(nu).cwiseInverse();
  S.middleCols(xoff, nl) = theta.F;
  S.rightCols(nu) = theta.H;
  const Eigen::VectorXd w = winv.cwiseInverse();

  const double scale = std::max({1.0, t.size() ? t.cwiseAbs().maxCoeff() : 0.0,
                                 nl ? s0.cwiseAbs().maxCoeff() : 0.0});
  const double feas_tol = 1e-9 * scale;

  std::int64_t faces = 1;
  for (int i = 0; i < nl; ++i) faces *= 3;

  Projection best;
  double best_dist = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_y;
  std::vector<int> digit(nl);
  for (std::int64_t f = 0; f < faces; ++f) {
    std::int64_t rest = f;
    int rows = 0;
    for (int i = 0; i < nl; ++i) {
      digit[i] = static_cast<int>(rest % 3);
      rest /= 3;
      rows += digit[i] == 2 ? 2 : 1;
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    int row = 0;
    for (int i = 0; i < nl; ++i) {
      if (digit[i] == 0 || digit[i] == 2) {
        C(row++, xoff + i) = 1.0;
      }
      if (digit[i] == 1 || digit[i] == 2) {
        C.row(row) = S.row(i);
        b(row++) = -s0(i);
      }
    }
    // y = t - W^-1 C' mu with (C W^-1 C') mu = C t - b.
    Eigen::VectorXd y = t;
    if (rows > 0) {
      const Eigen::MatrixXd CW = C * winv.asDiagonal();
      const Eigen::MatrixXd K = CW * C.transpose();
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(K);
      const Eigen::VectorXd mu = cod.solve(C * t - b);
      y = t - CW.transpose() * mu;
      if ((C * y - b).cwiseAbs().maxCoeff() > feas_tol) continue;
    }
    Eigen::VectorXd lam = y.segment(xoff, nl);
    for (int i = 0; i < nl; ++i) {
      if (digit[i] != 1) lam(i) = 0.0;
    }
    y.segment(xoff, nl) = lam;
    const Eigen::VectorXd s = S * y + s0;
    if (nl > 0 && (lam.minCoeff() < -feas_tol || s.minCoeff() < -feas_tol)) {
      continue;
    }
    const Eigen::VectorXd diff = y - t;
    const double dist = diff.dot(w.cwiseProduct(diff));
    if (!std::isfinite(best_dist) ||
        dist < best_dist - 1e-12 * (1.0 + best_dist)) {
      best_dist = dist;
      best_y = y;
      best.face = f;
    }
  }
  if (!std::isfinite(best_dist)) {
    throw C3Error("complementarity projection: no feasible face");
  }
  best.x = fix_state ? x : Eigen::VectorXd(best_y.head(nx));
  best.lambda = best_y.segment(xoff, nl).cwiseMax(0.0);
  best.u = best_y.tail(nu);
  best.distance = std::sqrt(best_dist);
  return best;
}

}  // namespace acmpc::c3
