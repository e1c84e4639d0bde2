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

#include "acmpc/lcs/lcs.hpp"

#include <Eigen/Eigenvalues>

#include "acmpc/solvers/lcp.hpp"

namespace acmpc::lcs {
namespace {

void Expect(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("LcsParams: " + what);
}

std::string Shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void LcsParams::Validate() const {
  const auto nx = A.rows();
  const auto nu = B.cols();
  const auto nl = F.rows();
  Expect(A.cols() == nx, "A must be square, got " + Shape(A));
  Expect(B.rows() == nx, "B must have n_x rows, got " + Shape(B));
  Expect(D.rows() == nx && D.cols() == nl, "D must be n_x x n_lambda, got " + Shape(D));
  Expect(d.size() == nx, "d must have n_x entries");
  Expect(E.rows() == nl && E.cols() == nx, "E must be n_lambda x n_x, got " + Shape(E));
  Expect(F.cols() == nl, "F must be square, got " + Shape(F));
  Expect(H.rows() == nl && H.cols() == nu, "H must be n_lambda x n_u, got " + Shape(H));
  Expect(c.size() == nl, "c must have n_lambda entries");
  Expect(A.allFinite() && B.allFinite() && D.allFinite() && d.allFinite() &&
             E.allFinite() && F.allFinite() && H.allFinite() && c.allFinite(),
         "non-finite entry");
}

double LcsParams::ConvexityMargin() const {
  if (F.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(F + F.transpose(),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

LcsParams LcsParams::WithShiftedC(const Eigen::VectorXd& r) const {
  LcsParams out = *this;
  out.c = c + r;
  return out;
}

LcsParams LcsParams::Zero(int nx, int nu, int nlambda) {
  LcsParams p;
  p.A = Eigen::MatrixXd::Zero(nx, nx);
  p.B = Eigen::MatrixXd::Zero(nx, nu);
  p.D = Eigen::MatrixXd::Zero(nx, nlambda);
  p.d = Eigen::VectorXd::Zero(nx);
  p.E = Eigen::MatrixXd::Zero(nlambda, nx);
  p.F = Eigen::MatrixXd::Zero(nlambda, nlambda);
  p.H = Eigen::MatrixXd::Zero(nlambda, nu);
  p.c = Eigen::VectorXd::Zero(nlambda);
  return p;
}

bool operator==(const LcsParams& a, const LcsParams& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.A, b.A) && same(a.B, b.B) && same(a.D, b.D) &&
         same(a.d, b.d) && same(a.E, b.E) && same(a.F, b.F) &&
         same(a.H, b.H) && same(a.c, b.c);
}

SteppingError::SteppingError(const std::string& what, Eigen::VectorXd x,
                             Eigen::VectorXd u, Eigen::VectorXd q_vec,
                             int index)
    : std::runtime_error(what),
      x_(std::move(x)),
      u_(std::move(u)),
      q_vec_(std::move(q_vec)),
      index_(index) {}

Eigen::VectorXd EffectiveOffset(const LcsParams& theta, const Residual& r) {
  if (r.size() != theta.num_contacts()) {
    throw std::invalid_argument("Residual has " + std::to_string(r.size()) +
                                " entries, LCS has n_lambda = " +
                                std::to_string(theta.num_contacts()));
  }
  return theta.c + r.r_comp;
}

Eigen::VectorXd ComplementarityOffset(const LcsParams& theta,
                                      const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& u,
                                      const Residual& r) {
  const Eigen::VectorXd offset = EffectiveOffset(theta, r);
  return theta.E * x + theta.H * u + offset;
}

StepResult LcsStep(const LcsState& x, const Eigen::VectorXd& u,
                   const LcsParams& theta, const Residual& r) {
  if (x.x.size() != theta.num_states() || u.size() != theta.num_inputs()) {
    throw std::invalid_argument("LcsStep: state/input size mismatch");
  }
  StepResult out;
  out.next.k = x.k + 1;
  const int nl = theta.num_contacts();
  if (nl == 0) {
    out.lambda = Eigen::VectorXd::Zero(0);
    out.next.x = theta.A * x.x + theta.B * u + theta.d;
    return out;
  }
  const Eigen::VectorXd q_vec = ComplementarityOffset(theta, x.x, u, r);
  const solvers::Lcp lcp{q_vec, theta.F};
  solvers::LcpSolution sol;
  bool solved = false;
  if (solvers::IsSymmetricPositiveDefinite(theta.F)) {
    sol = solvers::SolveLcpQp(lcp);
    solved = sol.solved() && solvers::SatisfiesComplementarity(sol);
  }
  if (!solved) {
    sol = solvers::SolveLcpLemke(lcp);
    solved = sol.solved();
  }
  if (!solved) {
    throw SteppingError(std::string("LCS step: contact LCP failed (") +
                            solvers::ToString(sol.status) + ")",
                        x.x, u, q_vec);
  }
  out.lambda = sol.lambda;
  out.next.x = theta.A * x.x + theta.B * u + theta.D * out.lambda + theta.d;
  return out;
}

Trajectory Rollout(const LcsState& x0, const std::vector<Eigen::VectorXd>& inputs,
                   const LcsParams& theta, const Residual& r) {
  if (inputs.empty()) throw std::invalid_argument("Rollout: no inputs");
  Trajectory traj;
  traj.states.reserve(inputs.size() + 1);
  traj.forces.reserve(inputs.size());
  traj.states.push_back(x0.x);
  LcsState x = x0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    try {
      StepResult step = LcsStep(x, inputs[i], theta, r);
      traj.forces.push_back(std::move(step.lambda));
      traj.states.push_back(step.next.x);
      x = std::move(step.next);
    } catch (const SteppingError& e) {
      throw SteppingError(std::string(e.what()) + " at rollout step " +
                              std::to_string(i),
                          e.x(), e.u(), e.q_vec(), static_cast<int>(i));
    }
  }
  return traj;
}

}  // namespace acmpc::lcs
