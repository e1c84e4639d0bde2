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

#include "acmpc/c3/c3.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace acmpc::c3 {
namespace {

constexpr double kPolishRegularization = 1e-9;
constexpr double kEngagedTol = 1e-10;
constexpr int kModeRefinements = 4;

void Expect(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("MpcConfig: " + what);
}

double MinEigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (M + M.transpose()),
                                                      Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void ExpectWeight(const Eigen::MatrixXd& M, int n, const std::string& name,
                  bool definite) {
  Expect(M.rows() == n && M.cols() == n,
         name + " must be " + std::to_string(n) + "x" + std::to_string(n));
  Expect(M.allFinite(), name + " has non-finite entries");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  Expect((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale,
         name + " must be symmetric");
  if (n == 0) return;
  const double min_eig = MinEigenvalue(M);
  if (definite) {
    Expect(min_eig > 0.0, name + " must be positive definite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
  } else {
    Expect(min_eig >= -1e-10 * scale,
           name + " must be positive semidefinite (min eigenvalue " +
               std::to_string(min_eig) + ")");
  }
}

// x_k = a_k + S_k v with v = [lambda_0; u_0; ...; lambda_{N-1}; u_{N-1}].
struct Condensed {
  int N = 0, nx = 0, nu = 0, nl = 0, nv = 0;
  std::vector<Eigen::VectorXd> a;
  std::vector<Eigen::MatrixXd> S;
  Eigen::MatrixXd Hc;   // cost: v'Hc v + 2 gc'v + const
  Eigen::VectorXd gc;
  Eigen::MatrixXd P;    // consensus: sum_k Z_k' G Z_k
  Eigen::VectorXd G;

  int lam(int k) const { return k * (nl + nu); }
  int inp(int k) const { return k * (nl + nu) + nl; }
  int dim() const { return nx + nl + nu; }
};

Condensed Condense(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
                   const MpcConfig& cfg) {
  Condensed c;
  c.N = cfg.horizon;
  c.nx = theta.num_states();
  c.nu = theta.num_inputs();
  c.nl = theta.num_contacts();
  c.nv = c.N * (c.nl + c.nu);
  c.a.resize(c.N + 1);
  c.S.resize(c.N + 1);
  c.a[0] = x0;
  c.S[0] = Eigen::MatrixXd::Zero(c.nx, c.nv);
  for (int k = 0; k < c.N; ++k) {
    c.a[k + 1] = theta.A * c.a[k] + theta.d;
    c.S[k + 1] = theta.A * c.S[k];
    c.S[k + 1].middleCols(c.lam(k), c.nl) += theta.D;
    c.S[k + 1].middleCols(c.inp(k), c.nu) += theta.B;
  }

  const Eigen::VectorXd ref = cfg.Reference(c.nx);
  c.Hc = Eigen::MatrixXd::Zero(c.nv, c.nv);
  c.gc = Eigen::VectorXd::Zero(c.nv);
  for (int k = 1; k <= c.N; ++k) {
    const Eigen::MatrixXd& Qk = k == c.N ? cfg.Q_N : cfg.Q;
    const Eigen::MatrixXd QS = Qk * c.S[k];
    c.Hc.noalias() += c.S[k].transpose() * QS;
    c.gc.noalias() += QS.transpose() * (c.a[k] - ref);
  }
  for (int k = 0; k < c.N; ++k) {
    c.Hc.block(c.inp(k), c.inp(k), c.nu, c.nu) += cfg.R;
  }

  c.G = cfg.Metric(c.nx, c.nu, c.nl);
  const Eigen::VectorXd gx = c.G.head(c.nx);
  c.P = Eigen::MatrixXd::Zero(c.nv, c.nv);
  for (int k = 0; k < c.N; ++k) {
    c.P.noalias() += c.S[k].transpose() * gx.asDiagonal() * c.S[k];
    for (int i = 0; i < c.nl; ++i) c.P(c.lam(k) + i, c.lam(k) + i) += c.G(c.nx + i);
    for (int i = 0; i < c.nu; ++i) {
      c.P(c.inp(k) + i, c.inp(k) + i) += c.G(c.nx + c.nl + i);
    }
  }
  return c;
}

Horizon Expand(const Condensed& c, const Eigen::VectorXd& v) {
  Horizon h;
  h.x.resize(c.N + 1);
  h.lambda.resize(c.N);
  h.u.resize(c.N);
  for (int k = 0; k <= c.N; ++k) h.x[k] = c.a[k] + c.S[k] * v;
  for (int k = 0; k < c.N; ++k) {
    h.lambda[k] = v.segment(c.lam(k), c.nl);
    h.u[k] = v.segment(c.inp(k), c.nu);
  }
  return h;
}

Eigen::VectorXd Slice(const Horizon& h, int k) {
  Eigen::VectorXd z(h.x[k].size() + h.lambda[k].size() + h.u[k].size());
  z << h.x[k], h.lambda[k], h.u[k];
  return z;
}

Horizon SolveQp(const Condensed& c, const Consensus& copies, double rho) {
  // Stationarity of v'Hc v + 2 gc'v + rho/2 sum ||Z v + zeta - delta + w||^2_G.
  Eigen::VectorXd p = Eigen::VectorXd::Zero(c.nv);
  const int dim = c.dim();
  for (int k = 0; k < c.N; ++k) {
    const Eigen::VectorXd off = copies.w[k] - copies.delta[k];
    Eigen::VectorXd g = c.G.cwiseProduct(off);
    g.head(c.nx) += c.G.head(c.nx).cwiseProduct(c.a[k]);
    p.noalias() += c.S[k].transpose() * g.head(c.nx);
    p.segment(c.lam(k), c.nl) += g.segment(c.nx, c.nl);
    p.segment(c.inp(k), c.nu) += g.tail(dim - c.nx - c.nl);
  }
  const Eigen::MatrixXd K = 2.0 * c.Hc + rho * c.P;
  Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    const double min_eig = c.nv ? MinEigenvalue(K) : 0.0;
    throw C3Error("QP step: singular KKT system (min eigenvalue " +
                  std::to_string(min_eig) + ")");
  }
  const Eigen::VectorXd v = llt.solve(-(2.0 * c.gc + rho * p));
  if (!v.allFinite()) throw C3Error("QP step: non-finite solution");
  return Expand(c, v);
}

// Equality QP with the contact modes fixed by `modes`: lambda_i = 0 on
// inactive rows, s_i = 0 on active rows.
std::optional<std::vector<Eigen::VectorXd>> Polish(
    const Condensed& c, const lcs::LcsParams& theta, const Eigen::VectorXd& coff,
    const std::vector<std::vector<bool>>& modes) {
  const int rows = c.N * c.nl;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(rows, c.nv);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  int row = 0;
  for (int k = 0; k < c.N; ++k) {
    for (int i = 0; i < c.nl; ++i, ++row) {
      if (!modes[k][i]) {
        C(row, c.lam(k) + i) = 1.0;
        continue;
      }
      C.row(row) = theta.E.row(i) * c.S[k];
      C.block(row, c.lam(k), 1, c.nl) += theta.F.row(i);
      C.block(row, c.inp(k), 1, c.nu) += theta.H.row(i);
      b(row) = -(theta.E.row(i).dot(c.a[k]) + coff(i));
    }
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(c.nv + rows, c.nv + rows);
  K.topLeftCorner(c.nv, c.nv) = 2.0 * c.Hc;
  for (int k = 0; k < c.N; ++k) {
    for (int i = 0; i < c.nl; ++i) {
      K(c.lam(k) + i, c.lam(k) + i) += 2.0 * kPolishRegularization;
    }
  }
  K.topRightCorner(c.nv, rows) = C.transpose();
  K.bottomLeftCorner(rows, c.nv) = C;
  Eigen::VectorXd rhs(c.nv + rows);
  rhs << -2.0 * c.gc, b;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) return std::nullopt;
  const Eigen::VectorXd sol = lu.solve(rhs);
  if (!sol.allFinite()) return std::nullopt;
  const Eigen::VectorXd v = sol.head(c.nv);
  if (rows && (C * v - b).cwiseAbs().maxCoeff() >
                  1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff())) {
    return std::nullopt;
  }
  std::vector<Eigen::VectorXd> u(c.N);
  for (int k = 0; k < c.N; ++k) u[k] = v.segment(c.inp(k), c.nu);
  return u;
}

void Clamp(const MpcConfig& cfg, std::vector<Eigen::VectorXd>* u) {
  for (auto& uk : *u) {
    if (cfg.u_min.size()) uk = uk.cwiseMax(cfg.u_min);
    if (cfg.u_max.size()) uk = uk.cwiseMin(cfg.u_max);
  }
}

double Norm2(const std::vector<Eigen::VectorXd>& a,
             const std::vector<Eigen::VectorXd>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]).squaredNorm();
  return std::sqrt(s);
}

}  // namespace

void MpcConfig::Validate(int nx, int nu, int nlambda) const {
  Expect(horizon >= 1, "horizon must be >= 1");
  ExpectWeight(Q, nx, "Q", false);
  ExpectWeight(R, nu, "R", true);
  ExpectWeight(Q_N, nx, "Q_N", false);
  Expect(x_ref.size() == 0 || x_ref.size() == nx, "x_ref must have n_x entries");
  Expect(std::isfinite(rho) && rho > 0.0, "rho must be > 0");
  Expect(std::isfinite(rho_growth) && rho_growth >= 1.0,
         "rho_growth must be >= 1");
  Expect(admm_iterations >= 1, "admm_iterations must be >= 1");
  Expect(metric.size() == 0 || metric.size() == nx + nlambda + nu,
         "metric must have n_x + n_lambda + n_u entries");
  Expect(metric.size() == 0 || metric.minCoeff() > 0.0, "metric must be > 0");
  Expect(u_min.size() == 0 || u_min.size() == nu, "u_min must have n_u entries");
  Expect(u_max.size() == 0 || u_max.size() == nu, "u_max must have n_u entries");
  if (u_min.size() && u_max.size()) {
    Expect((u_max - u_min).minCoeff() >= 0.0, "u_min must not exceed u_max");
  }
  Expect(mode_cap >= nlambda, "n_lambda = " + std::to_string(nlambda) +
                                  " exceeds mode_cap " + std::to_string(mode_cap));
}

Eigen::VectorXd MpcConfig::Metric(int nx, int nu, int nlambda) const {
  if (metric.size()) return metric;
  return Eigen::VectorXd::Ones(nx + nlambda + nu);
}

Eigen::VectorXd MpcConfig::Reference(int nx) const {
  return x_ref.size() ? x_ref : Eigen::VectorXd::Zero(nx);
}

Horizon Horizon::Zero(int N, int nx, int nu, int nlambda) {
  Horizon h;
  h.x.assign(N + 1, Eigen::VectorXd::Zero(nx));
  h.lambda.assign(N, Eigen::VectorXd::Zero(nlambda));
  h.u.assign(N, Eigen::VectorXd::Zero(nu));
  return h;
}

Consensus Consensus::Zero(int N, int dim) {
  Consensus c;
  c.delta.assign(N, Eigen::VectorXd::Zero(dim));
  c.w.assign(N, Eigen::VectorXd::Zero(dim));
  return c;
}

double PlanCost(const Horizon& h, const MpcConfig& cfg) {
  const int N = h.size();
  const Eigen::VectorXd ref = cfg.Reference(static_cast<int>(h.x[0].size()));
  double cost = 0.0;
  for (int k = 0; k < N; ++k) {
    const Eigen::VectorXd e = h.x[k] - ref;
    cost += e.dot(cfg.Q * e) + h.u[k].dot(cfg.R * h.u[k]);
  }
  const Eigen::VectorXd e = h.x[N] - ref;
  return cost + e.dot(cfg.Q_N * e);
}

Horizon QpStep(const Consensus& copies, double rho, const Eigen::VectorXd& x0,
               const lcs::LcsParams& theta, const MpcConfig& cfg) {
  const int nx = theta.num_states();
  const int nu = theta.num_inputs();
  const int nl = theta.num_contacts();
  if (x0.size() != nx) throw std::invalid_argument("QpStep: x0 size mismatch");
  if (static_cast<int>(copies.delta.size()) != cfg.horizon ||
      copies.w.size() != copies.delta.size()) {
    throw std::invalid_argument("QpStep: consensus length must equal horizon");
  }
  // Zero metric entries are allowed here (consensus on a subset only).
  Eigen::VectorXd G = cfg.Metric(nx, nu, nl);
  if (G.size() != nx + nl + nu || G.minCoeff() < 0.0) {
    throw std::invalid_argument("QpStep: bad metric");
  }
  MpcConfig local = cfg;
  local.metric = G;
  const Condensed c = Condense(x0, theta, local);
  return SolveQp(c, copies, rho);
}

MpcPlan RunC3(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
              const lcs::Residual& r, const MpcConfig& cfg, Consensus* copies) {
  const auto start = std::chrono::steady_clock::now();
  theta.Validate();
  const int nx = theta.num_states();
  const int nu = theta.num_inputs();
  const int nl = theta.num_contacts();
  cfg.Validate(nx, nu, nl);
  if (x0.size() != nx) throw std::invalid_argument("C3: x0 size mismatch");
  const Eigen::VectorXd coff = lcs::EffectiveOffset(theta, r);
  const Condensed c = Condense(x0, theta, cfg);
  const int N = cfg.horizon;
  const int dim = c.dim();
  if (static_cast<int>(copies->delta.size()) != N ||
      copies->w.size() != copies->delta.size() ||
      copies->delta[0].size() != dim) {
    *copies = Consensus::Zero(N, dim);
  }

  MpcPlan plan;
  double rho = cfg.rho;
  Horizon z;
  for (int it = 0; it < cfg.admm_iterations; ++it) {
    try {
      z = SolveQp(c, *copies, rho);
    } catch (const C3Error& e) {
      throw C3Error(std::string(e.what()) + " at ADMM iteration " +
                        std::to_string(it),
                    it);
    }
    const std::vector<Eigen::VectorXd> prev = copies->delta;
    std::vector<Eigen::VectorXd> zs(N);
    for (int k = 0; k < N; ++k) {
      zs[k] = Slice(z, k);
      const Eigen::VectorXd t = zs[k] + copies->w[k];
      Projection p;
      try {
        p = ProjectComplementarity(t.head(nx), t.segment(nx, nl), t.tail(nu),
                                   theta, r, c.G, k == 0, cfg.mode_cap);
      } catch (const C3Error& e) {
        throw C3Error(std::string(e.what()) + " at ADMM iteration " +
                          std::to_string(it) + ", step " + std::to_string(k),
                      it);
      }
      copies->delta[k].resize(dim);
      copies->delta[k] << p.x, p.lambda, p.u;
      copies->w[k] += zs[k] - copies->delta[k];
    }
    plan.primal_residual.push_back(Norm2(zs, copies->delta));
    plan.dual_residual.push_back(rho * Norm2(copies->delta, prev));
    rho *= cfg.rho_growth;
    for (auto& w : copies->w) w /= cfg.rho_growth;
  }

  // Candidate input sequences, each rolled out through the LCS so the plan
  // satisfies the dynamics and complementarity exactly. Mode-fixed polishes
  // start from the final copies and from the contact-free mode, then follow
  // the modes realized by the best rollout.
  using Modes = std::vector<std::vector<bool>>;
  double best = std::numeric_limits<double>::infinity();
  Modes best_modes;
  auto consider = [&](std::vector<Eigen::VectorXd> u, bool is_polish) {
    Clamp(cfg, &u);
    lcs::Trajectory traj;
    try {
      traj = lcs::Rollout(lcs::LcsState{x0, 0}, u, theta, r);
    } catch (const lcs::SteppingError&) {
      return;
    }
    Horizon h{std::move(traj.states), std::move(traj.forces), std::move(u)};
    const double cost = PlanCost(h, cfg);
    if (!std::isfinite(cost) || !(cost < best)) return;
    best = cost;
    best_modes.assign(N, std::vector<bool>(nl, false));
    for (int k = 0; k < N; ++k) {
      for (int i = 0; i < nl; ++i) best_modes[k][i] = h.lambda[k](i) > 0.0;
    }
    plan.traj = std::move(h);
    plan.polished = is_polish;
  };
  auto polish = [&](const Modes& modes) {
    if (auto u = Polish(c, theta, coff, modes)) consider(std::move(*u), true);
  };

  Modes from_copies(N, std::vector<bool>(nl, false));
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < nl; ++i) from_copies[k][i] = copies->delta[k](nx + i) > 0.0;
  }
  const Modes contact_free(N, std::vector<bool>(nl, false));
  polish(from_copies);
  if (from_copies != contact_free) polish(contact_free);
  std::vector<Eigen::VectorXd> u_delta(N);
  for (int k = 0; k < N; ++k) u_delta[k] = copies->delta[k].tail(nu);
  consider(std::move(u_delta), false);
  consider(z.u, false);
  std::vector<Modes> tried = {from_copies, contact_free};
  for (int pass = 0; pass < kModeRefinements && std::isfinite(best); ++pass) {
    if (std::find(tried.begin(), tried.end(), best_modes) != tried.end()) break;
    tried.push_back(best_modes);
    polish(best_modes);
  }
  if (!std::isfinite(best)) throw C3Error("C3: no candidate plan could be rolled out");
  plan.cost = best;
  plan.engaged_modes.assign(N, 0u);
  for (int k = 0; k < N; ++k) {
    for (int i = 0; i < nl; ++i) {
      if (plan.traj.lambda[k](i) > kEngagedTol) plan.engaged_modes[k] |= 1u << i;
    }
  }
  plan.solve_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return plan;
}

MpcPlan C3Solve(const Eigen::VectorXd& x0, const lcs::LcsParams& theta,
                const lcs::Residual& r, const MpcConfig& cfg) {
  Consensus copies;
  return RunC3(x0, theta, r, cfg, &copies);
}

lcs::StepResult PlanToTarget(const Eigen::VectorXd& x_star,
                             const Eigen::VectorXd& u0,
                             const lcs::LcsParams& theta,
                             const lcs::Residual& r) {
  return lcs::LcsStep(lcs::LcsState{x_star, 0}, u0, theta, r);
}

C3Controller::C3Controller(MpcConfig cfg) : cfg_(std::move(cfg)) {}

MpcPlan C3Controller::Solve(const Eigen::VectorXd& x0,
                            const lcs::LcsParams& theta,
                            const lcs::Residual& r) {
  Consensus copies;
  if (cfg_.warm_start && cache_) {
    // Shift one step. The scaled duals are reused as stored, i.e. relative
    // to the final rho of the previous solve; rescaling them to the initial
    // rho compounds over consecutive solves.
    copies = *cache_;
    for (std::size_t k = 0; k + 1 < copies.delta.size(); ++k) {
      copies.delta[k] = copies.delta[k + 1];
      copies.w[k] = copies.w[k + 1];
    }
  }
  try {
    MpcPlan plan = RunC3(x0, theta, r, cfg_, &copies);
    if (cfg_.warm_start) cache_ = std::move(copies);
    return plan;
  } catch (...) {
    cache_.reset();
    throw;
  }
}

}  // namespace acmpc::c3
