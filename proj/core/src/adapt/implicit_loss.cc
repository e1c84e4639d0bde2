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

#include "acmpc/adapt/implicit_loss.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>

#include <Eigen/Eigenvalues>

#include "acmpc/solvers/convex_qp.hpp"
#include "acmpc/solvers/lcp.hpp"

namespace acmpc::adapt {
namespace {

constexpr double kRoundoff = 1e-13;

}  // namespace

void LearnConfig::Validate() const {
  if (!(eps > 0.0)) throw std::invalid_argument("learn: eps must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("learn: gamma must be > 0");
  if (!(xi > 0.0)) throw std::invalid_argument("learn: xi must be > 0");
  if (n_b < 1) throw std::invalid_argument("learn: n_b must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("learn: beta1, beta2 must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0) || !(qp_tol > 0.0)) {
    throw std::invalid_argument("learn: adam_eps and qp_tol must be > 0");
  }
  if (Q_d.size() > 0) {
    if (Q_d.rows() != Q_d.cols()) throw std::invalid_argument("learn: Q_d must be square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        0.5 * (Q_d + Q_d.transpose()), Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, Q_d.cwiseAbs().maxCoeff())) {
      throw std::invalid_argument("learn: Q_d must be PSD");
    }
  }
}

Eigen::MatrixXd LearnConfig::PredictionWeight(int n_x) const {
  if (Q_d.size() == 0) return Eigen::MatrixXd::Identity(n_x, n_x);
  if (Q_d.rows() != n_x) {
    throw std::invalid_argument("learn: Q_d is " + std::to_string(Q_d.rows()) +
                                "x" + std::to_string(Q_d.cols()) + ", n_x = " +
                                std::to_string(n_x));
  }
  return Q_d;
}

Eigen::MatrixXd VelocityWeight(int n_x, double weight) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n_x, n_x);
  Q.bottomRightCorner(n_x / 2, n_x / 2).diagonal().setConstant(weight);
  return Q;
}

PointLoss ImplicitLossPoint(const DataPoint& pt, const lcs::LcsParams& theta,
                            const lcs::Residual& r, const LearnConfig& cfg) {
  const int nl = theta.num_contacts();
  const int nx = theta.num_states();
  if (pt.x.size() != nx || pt.x_next.size() != nx || pt.u.size() != theta.num_inputs()) {
    throw LearnerError("data point does not match the LCS dimensions");
  }
  const double sigma = theta.ConvexityMargin();
  if (!(cfg.gamma < sigma)) {
    throw LearnerError("gamma condition violated: gamma = " + std::to_string(cfg.gamma) +
                       " >= sigma_min(F + F') = " + std::to_string(sigma));
  }
  const Eigen::MatrixXd Q = cfg.PredictionWeight(nx);
  const Eigen::VectorXd z = theta.A * pt.x + theta.B * pt.u + theta.d - pt.x_next;
  const Eigen::VectorXd p = lcs::ComplementarityOffset(theta, pt.x, pt.u, r);
  const Eigen::MatrixXd& F = theta.F;
  const Eigen::MatrixXd& D = theta.D;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nl, nl);

  // Objective times eps * gamma, over w = [lambda; eta]. The scaling keeps
  // the Hessian O(1) at the small eps the learner runs with.
  const double eg = cfg.eps * cfg.gamma;
  Eigen::MatrixXd H(2 * nl, 2 * nl);
  H.topLeftCorner(nl, nl) = eg * D.transpose() * Q * D + F.transpose() * F;
  H.topRightCorner(nl, nl) = cfg.gamma * I - F.transpose();
  H.bottomLeftCorner(nl, nl) = cfg.gamma * I - F;
  H.bottomRightCorner(nl, nl) = I;
  H = 0.5 * (H + H.transpose());
  Eigen::VectorXd lin(2 * nl);
  lin.head(nl) = eg * D.transpose() * (Q * z) + F.transpose() * p;
  lin.tail(nl) = -p;

  const solvers::QpResult qp =
      solvers::SolveConvexQp(solvers::ConvexQp::NonNegative(H, lin), cfg.qp_tol);
  if (qp.status != solvers::QpStatus::kOptimal) {
    throw LearnerError(std::string("implicit loss inner QP: ") +
                       solvers::ToString(qp.status));
  }

  PointLoss out;
  out.lambda = qp.z.head(nl).cwiseMax(0.0);
  // eta has a closed form given lambda; using it makes the no-contact
  // gradient exactly zero.
  const Eigen::VectorXd s = p + F * out.lambda;
  out.eta = (s - cfg.gamma * out.lambda).cwiseMax(0.0);
  Eigen::VectorXd pred = D * out.lambda + z;
  // Round-off floors: a transition the model explains exactly must give a
  // zero gradient rather than noise that the optimizer would normalize.
  const double pred_floor =
      kRoundoff * std::max(1.0, pt.x_next.cwiseAbs().maxCoeff());
  for (int j = 0; j < nx; ++j) {
    if (std::abs(pred(j)) <= pred_floor) pred(j) = 0.0;
  }
  const double gap_floor = kRoundoff * std::max(1.0, p.cwiseAbs().maxCoeff());

  // The gradient is (s - eta) / (eps gamma), but s - eta is O(eps gamma) and
  // forming it by subtraction loses most digits. Read it off the KKT
  // conditions of the inner problem instead:
  //   eta_i > 0:               g_i = lambda_i / eps
  //   lambda_i = eta_i = 0:    g_i = s_i / (eps gamma)
  //   lambda_i > 0, eta_i = 0: [F' g]_i = -[D' Q (D lambda + z)]_i
  Eigen::VectorXd g = Eigen::VectorXd::Zero(nl);
  std::vector<int> free_rows;
  for (int i = 0; i < nl; ++i) {
    if (out.eta(i) > 0.0) {
      g(i) = out.lambda(i) / cfg.eps;
    } else if (out.lambda(i) > 0.0) {
      free_rows.push_back(i);
    } else {
      g(i) = std::abs(s(i)) <= gap_floor ? 0.0 : s(i) / eg;
    }
  }
  if (!free_rows.empty()) {
    const int nf = static_cast<int>(free_rows.size());
    const Eigen::MatrixXd Ft = F.transpose();
    const Eigen::VectorXd rhs_full = -(D.transpose() * (Q * pred)) - Ft * g;
    Eigen::MatrixXd Fuu(nf, nf);
    Eigen::VectorXd rhs(nf);
    for (int a = 0; a < nf; ++a) {
      rhs(a) = rhs_full(free_rows[a]);
      for (int b = 0; b < nf; ++b) Fuu(a, b) = Ft(free_rows[a], free_rows[b]);
    }
    const Eigen::VectorXd gu = Fuu.fullPivLu().solve(rhs);
    for (int a = 0; a < nf; ++a) g(free_rows[a]) = gu(a);
  }
  out.gradient = g;
  // Every term is nonnegative, so no cancellation; |s - eta|^2 / (2 gamma eps)
  // equals eps gamma |g|^2 / 2.
  out.value = 0.5 * pred.dot(Q * pred) + out.lambda.dot(out.eta) / cfg.eps +
              0.5 * eg * g.squaredNorm();
  return out;
}

BufferLoss LossAndGradient(const AugmentedBuffer& buffer, const lcs::Residual& r,
                           const LearnConfig& cfg) {
  BufferLoss out;
  out.gradient = Eigen::VectorXd::Zero(r.size());
  for (std::size_t i = 0; i < buffer.entries.size(); ++i) {
    const AugmentedEntry& e = buffer.entries[i];
    try {
      const PointLoss l = ImplicitLossPoint(e.point, *e.theta, r, cfg);
      out.value += l.value;
      out.gradient += l.gradient;
    } catch (const LearnerError& err) {
      throw LearnerError("buffer entry " + std::to_string(i) + " (step " +
                             std::to_string(e.point.k) + "): " + err.what(),
                         static_cast<int>(i));
    } catch (const std::invalid_argument& err) {
      throw LearnerError("buffer entry " + std::to_string(i) + ": " + err.what(),
                         static_cast<int>(i));
    }
  }
  return out;
}

Eigen::VectorXd LossGradient(const AugmentedBuffer& buffer, const lcs::Residual& r,
                             const LearnConfig& cfg) {
  return LossAndGradient(buffer, r, cfg).gradient;
}

double Loss(const AugmentedBuffer& buffer, const lcs::Residual& r,
            const LearnConfig& cfg) {
  return LossAndGradient(buffer, r, cfg).value;
}

}  // namespace acmpc::adapt
