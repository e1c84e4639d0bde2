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

#ifndef ACMPC_C3_C3_HPP_
#define ACMPC_C3_C3_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acmpc/lcs/lcs.hpp"

namespace acmpc::c3 {

// Raised by the ADMM loop. iteration() is -1 outside the loop (validation,
// final polish).
class C3Error : public std::runtime_error {
 public:
  C3Error(const std::string& what, int iteration = -1)
      : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

struct MpcConfig {
  int horizon = 5;
  // Stage weights Q_k and R_k are shared across the horizon.
  Eigen::MatrixXd Q;
  Eigen::MatrixXd R;
  Eigen::MatrixXd Q_N;
  // Tracked state; zero when empty.
  Eigen::VectorXd x_ref;

  double rho = 1.0;
  double rho_growth = 1.2;
  int admm_iterations = 10;
  // Consensus / projection metric, one weight per entry of (x, lambda, u).
  // Empty means all ones.
  Eigen::VectorXd metric;
  // Elementwise input bounds; empty means unbounded.
  Eigen::VectorXd u_min;
  Eigen::VectorXd u_max;
  int mode_cap = 10;
  bool warm_start = true;

  // Throws std::invalid_argument. Dimensions are checked against theta when
  // given.
  void Validate(int nx, int nu, int nlambda) const;
  Eigen::VectorXd Metric(int nx, int nu, int nlambda) const;
  Eigen::VectorXd Reference(int nx) const;
};

// Horizon trajectory in the layout of the MPC problem.
struct Horizon {
  std::vector<Eigen::VectorXd> x;       // N + 1
  std::vector<Eigen::VectorXd> lambda;  // N
  std::vector<Eigen::VectorXd> u;       // N

  int size() const { return static_cast<int>(u.size()); }
  static Horizon Zero(int N, int nx, int nu, int nlambda);
};

struct MpcPlan {
  Horizon traj;
  std::vector<double> primal_residual;  // per ADMM iteration, ||z - delta||
  std::vector<double> dual_residual;    // per ADMM iteration, rho ||delta - delta_prev||
  double cost = 0.0;
  double solve_ms = 0.0;
  // Bit i of engaged_modes[k] is set when lambda_k(i) > 0.
  std::vector<std::uint32_t> engaged_modes;
  // True when the mode-fixed polish produced the returned inputs.
  bool polished = false;

  const Eigen::VectorXd& u0() const { return traj.u.front(); }
};

// MPC objective of a horizon trajectory.
double PlanCost(const Horizon& h, const MpcConfig& cfg);

// ADMM copies delta and scaled duals w, one (x, lambda, u) slice per step.
struct Consensus {
  std::vector<Eigen::VectorXd> delta;
  std::vector<Eigen::VectorXd> w;

  static Consensus Zero(int N, int dim);
};

// Minimizes the stage costs plus rho/2 sum_k ||z_k - delta_k + w_k||^2_G over
// the dynamics rows (condensed form, so the dynamics hold by construction).
Horizon QpStep(const Consensus& copies, double rho, const Eigen::VectorXd& x0,
               const lcs::LcsParams& theta, const MpcConfig& cfg);

struct Projection {
  Eigen::VectorXd x;
  Eigen::VectorXd lambda;
  Eigen::VectorXd u;
  double distance = 0.0;
  // Face index: digit i (base 3) is 0 for lambda_i = 0, 1 for s_i = 0, 2 for
  // both.
  std::int64_t face = 0;
};

// Euclidean projection, in the metric diag(weights), of (x, lambda, u) onto
//   lambda >= 0, s = E x + F lambda + H u + c + r >= 0, lambda's = 0.
// With fix_state the x slice is held at its input value.
Projection ProjectComplementarity(const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& lambda,
                                  const Eigen::VectorXd& u,
                                  const lcs::LcsParams& theta,
                                  const lcs::Residual& r,
                                  const Eigen::VectorXd& weights,
                                  bool fix_state = false, int mode_cap = 10);

// Cold-start solve.
MpcPlan C3Solve(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
                const lcs::Residual& r, const MpcConfig& cfg);

// (x_d, lambda_d) = one LCS step from x_star under u0.
lcs::StepResult PlanToTarget(const Eigen::VectorXd& x_star,
                             const Eigen::VectorXd& u0,
                             const lcs::LcsParams& theta,
                             const lcs::Residual& r);

// Receding-horizon controller holding the warm-start cache. Not thread safe.
class C3Controller {
 public:
  explicit C3Controller(MpcConfig cfg);

  MpcPlan Solve(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
                const lcs::Residual& r);
  void Reset() { cache_.reset(); }

  const MpcConfig& config() const { return cfg_; }
  MpcConfig& mutable_config() { return cfg_; }

 private:
  MpcConfig cfg_;
  std::optional<Consensus> cache_;
};

// Shared ADMM driver; `copies` is the initial consensus state and receives
// the final one.
MpcPlan RunC3(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
              const lcs::Residual& r, const MpcConfig& cfg, Consensus* copies);

}  // namespace acmpc::c3

#endif  // ACMPC_C3_C3_HPP_
