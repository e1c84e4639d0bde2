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

#include "acmpc/models/anitescu.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "acmpc/solvers/lcp.hpp"

namespace acmpc::models {
namespace {

Eigen::LLT<Eigen::MatrixXd> FactorMass(const RigidBodyModel& model,
                                       const Eigen::VectorXd& q) {
  Eigen::LLT<Eigen::MatrixXd> llt(model.MassMatrix(q));
  if (llt.info() != Eigen::Success) {
    throw ModelError("mass matrix is singular or indefinite");
  }
  return llt;
}

void CheckSizes(const RigidBodyModel& model, const Eigen::VectorXd& q,
                const Eigen::VectorXd& v, const Eigen::VectorXd& u) {
  if (q.size() != model.num_positions() || v.size() != model.num_velocities() ||
      u.size() != model.num_inputs()) {
    throw std::invalid_argument("model state/input size mismatch");
  }
}

solvers::LcpSolution SolveContactLcp(const Eigen::VectorXd& q,
                                     const Eigen::MatrixXd& F) {
  const solvers::Lcp lcp{q, F};
  if (solvers::IsSymmetricPositiveDefinite(F)) {
    solvers::LcpSolution sol = solvers::SolveLcpQp(lcp);
    if (sol.solved() && solvers::SatisfiesComplementarity(sol)) return sol;
  }
  return solvers::SolveLcpLemke(lcp);
}

}  // namespace

AnitescuResult AnitescuStep(const RigidBodyModel& model, const Eigen::VectorXd& q,
                            const Eigen::VectorXd& v, const Eigen::VectorXd& u,
                            const AnitescuOptions& opts) {
  CheckSizes(model, q, v, u);
  const double dt = model.timestep();
  const auto llt = FactorMass(model, q);
  const Eigen::VectorXd v_free =
      v + dt * llt.solve(model.InputMap(q) * u - model.Bias(q, v));

  AnitescuResult out;
  const int nl = model.num_lambda();
  out.lambda = Eigen::VectorXd::Zero(nl);
  out.v_next = v_free;
  if (nl > 0) {
    const Eigen::MatrixXd Jc = ContactJacobian(model, q);
    const Eigen::MatrixXd MinvJcT = llt.solve(Jc.transpose());
    const Eigen::MatrixXd Et = EdgeSelector(model.num_contacts(), model.num_edges());
    out.lcp_F = Jc * MinvJcT;
    out.lcp_F = 0.5 * (out.lcp_F + out.lcp_F.transpose());
    out.lcp_F.diagonal().array() += opts.eps_c;
    out.lcp_q = Et.transpose() * model.Gap(q) / dt + Jc * v_free;
    const solvers::LcpSolution sol = SolveContactLcp(out.lcp_q, out.lcp_F);
    if (!sol.solved()) {
      throw lcs::SteppingError(std::string("Anitescu step: contact LCP failed (") +
                                   solvers::ToString(sol.status) + ")",
                               StackState(q, v), u, out.lcp_q);
    }
    out.lambda = sol.lambda;
    out.v_next += MinvJcT * out.lambda;
  }
  out.q_next = q + dt * out.v_next;
  return out;
}

Eigen::VectorXd AnitescuStepState(const RigidBodyModel& model,
                                  const Eigen::VectorXd& x,
                                  const Eigen::VectorXd& u,
                                  const AnitescuOptions& opts) {
  const AnitescuResult r =
      AnitescuStep(model, Positions(model, x), Velocities(model, x), u, opts);
  return StackState(r.q_next, r.v_next);
}

Eigen::MatrixXd DynamicsJacobian(const RigidBodyModel& model,
                                 const Eigen::VectorXd& q,
                                 const Eigen::VectorXd& v,
                                 const Eigen::VectorXd& u, double h) {
  const int n = model.num_positions();
  const int m = model.num_inputs();
  Eigen::MatrixXd J(n, 2 * n + m);
  Eigen::VectorXd xi(2 * n + m);
  xi << q, v, u;
  auto f = [&](const Eigen::VectorXd& z) {
    return model.Acceleration(z.head(n), z.segment(n, n), z.tail(m));
  };
  for (int j = 0; j < xi.size(); ++j) {
    Eigen::VectorXd plus = xi;
    Eigen::VectorXd minus = xi;
    plus(j) += h;
    minus(j) -= h;
    J.col(j) = (f(plus) - f(minus)) / (2.0 * h);
  }
  return J;
}

lcs::LcsParams Linearize(const RigidBodyModel& model, const Eigen::VectorXd& x_star,
                         const Eigen::VectorXd& u_star,
                         const AnitescuOptions& opts) {
  const int n = model.num_positions();
  const int m = model.num_inputs();
  const int nl = model.num_lambda();
  if (x_star.size() != 2 * n) throw std::invalid_argument("x* size mismatch");
  const Eigen::VectorXd q = x_star.head(n);
  const Eigen::VectorXd v = x_star.tail(n);
  CheckSizes(model, q, v, u_star);
  const double dt = model.timestep();
  const auto llt = FactorMass(model, q);

  const Eigen::VectorXd f_star = model.Acceleration(q, v, u_star);
  const Eigen::MatrixXd Jf = DynamicsJacobian(model, q, v, u_star, opts.fd_step);
  const Eigen::MatrixXd Jq = Jf.leftCols(n);
  const Eigen::MatrixXd Jv = Jf.middleCols(n, n);
  const Eigen::MatrixXd Ju = Jf.rightCols(m);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);

  // Velocity rows: v+ = A_v x + B_v u + D_v lambda + d_v.
  Eigen::MatrixXd Av(n, 2 * n);
  Av << dt * Jq, I + dt * Jv;
  const Eigen::MatrixXd Bv = dt * Ju;
  const Eigen::VectorXd dv = dt * (f_star - Jq * q - Jv * v - Ju * u_star);

  lcs::LcsParams p = lcs::LcsParams::Zero(2 * n, m, nl);
  p.A.topRows(n) = dt * Av;
  p.A.topLeftCorner(n, n) += I;
  p.A.bottomRows(n) = Av;
  p.B.topRows(n) = dt * Bv;
  p.B.bottomRows(n) = Bv;
  p.d.head(n) = dt * dv;
  p.d.tail(n) = dv;

  if (nl > 0) {
    const Eigen::MatrixXd Jc = ContactJacobian(model, q);
    const Eigen::MatrixXd Dv = llt.solve(Jc.transpose());
    const Eigen::MatrixXd Et = EdgeSelector(model.num_contacts(), model.num_edges());
    const Eigen::MatrixXd Jn = model.NormalJacobian(q);
    p.D.topRows(n) = dt * Dv;
    p.D.bottomRows(n) = Dv;
    p.E = Jc * Av;
    p.E.leftCols(n) += Et.transpose() * Jn / dt;
    p.F = Jc * Dv;
    p.F = 0.5 * (p.F + p.F.transpose());
    p.F.diagonal().array() += opts.eps_c;
    p.H = Jc * Bv;
    p.c = Jc * dv + Et.transpose() * (model.Gap(q) - Jn * q) / dt;
  }
  return p;
}

}  // namespace acmpc::models
