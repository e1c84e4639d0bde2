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

#ifndef ACMPC_SOLVERS_CONVEX_QP_HPP_
#define ACMPC_SOLVERS_CONVEX_QP_HPP_

#include <optional>

#include <Eigen/Core>

namespace acmpc::solvers {

// min 0.5 z'Hz + g'z  s.t.  z_i >= lower_i.
// Entries of `lower` are either -infinity (free) or a finite bound; the
// library only ever uses 0.
struct ConvexQp {
  Eigen::MatrixXd H;
  Eigen::VectorXd g;
  Eigen::VectorXd lower;

  int size() const { return static_cast<int>(g.size()); }

  // z >= 0 on every coordinate.
  static ConvexQp NonNegative(Eigen::MatrixXd H, Eigen::VectorXd g);
  // Throws SolverError on shape mismatch, asymmetry above 1e-12 (relative to
  // max(1, |H|)) or min eigenvalue of H + 1e-10 I below -1e-9.
  void Validate() const;
  double Objective(const Eigen::VectorXd& z) const;
};

enum class QpStatus { kOptimal, kMaxIterations, kUnbounded };

const char* ToString(QpStatus status);

struct QpResult {
  Eigen::VectorXd z;
  // Infinity norm of the projected gradient at z.
  double kkt_residual = 0.0;
  int iterations = 0;
  QpStatus status = QpStatus::kOptimal;
};

inline constexpr int kQpIterationCap = 10000;

// Projected gradient of the objective at z (zero where z is at its bound and
// the gradient points outward).
Eigen::VectorXd ProjectedGradient(const ConvexQp& p, const Eigen::VectorXd& z);

// Primal active-set method with exact subspace solves. `tol` is applied to
// the projected gradient relative to max(1, |H|_inf |z|_inf, |g|_inf).
// Returns the best iterate with kMaxIterations when the cap is hit.
QpResult SolveConvexQp(const ConvexQp& p, double tol,
                       const std::optional<Eigen::VectorXd>& initial = {});

}  // namespace acmpc::solvers

#endif  // ACMPC_SOLVERS_CONVEX_QP_HPP_
