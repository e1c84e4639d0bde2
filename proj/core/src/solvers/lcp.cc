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

#include "acmpc/solvers/lcp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "acmpc/solvers/convex_qp.hpp"

namespace acmpc::solvers {
namespace {

constexpr double kPivotTol = 1e-12;
constexpr double kRatioTieTol = 1e-12;
constexpr double kDegeneratePerturbation = 1e-12;

// Solves F_aa l_a = -q_a on the final basis to clean up tableau round-off.
// Keeps the tableau answer when the subsystem is singular or the refined
// point is worse.
void RefineOnBasis(const Lcp& p, const std::vector<int>& active,
                   Eigen::VectorXd* lambda) {
  if (active.empty()) return;
  const int k = static_cast<int>(active.size());
  Eigen::MatrixXd Faa(k, k);
  Eigen::VectorXd qa(k);
  for (int i = 0; i < k; ++i) {
    qa(i) = p.q(active[i]);
    for (int j = 0; j < k; ++j) Faa(i, j) = p.F(active[i], active[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Faa);
  if (!lu.isInvertible()) return;
  const Eigen::VectorXd la = lu.solve(-qa);
  Eigen::VectorXd refined = Eigen::VectorXd::Zero(p.size());
  for (int i = 0; i < k; ++i) refined(active[i]) = la(i);
  auto violation = [&p](const Eigen::VectorXd& l) {
    const Eigen::VectorXd y = p.F * l + p.q;
    return std::max({0.0, -l.minCoeff(), -y.minCoeff(), std::abs(l.dot(y))});
  };
  if (violation(refined) <= violation(*lambda)) *lambda = refined;
}

LcpSolution Finish(const Lcp& p, Eigen::VectorXd lambda, LcpStatus status,
                   int pivots) {
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) < 0.0 && lambda(i) > -kComplementarityTol) lambda(i) = 0.0;
  }
  LcpSolution sol;
  sol.y = p.F * lambda + p.q;
  sol.lambda = std::move(lambda);
  sol.comp_residual = sol.lambda.dot(sol.y);
  sol.status = status;
  sol.pivots = pivots;
  return sol;
}

struct LemkeRun {
  LcpSolution solution;
  bool degenerate = false;
};

LemkeRun RunLemke(const Lcp& p) {
  const int m = p.size();
  LemkeRun run;
  if (p.q.minCoeff() >= 0.0) {
    run.solution = Finish(p, Eigen::VectorXd::Zero(m), LcpStatus::kSolved, 0);
    return run;
  }

  // Columns: w (0..m-1), z (m..2m-1), z0 (2m), rhs (2m+1).
  const int z0 = 2 * m;
  const int rhs = 2 * m + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, 2 * m + 2);
  T.leftCols(m).setIdentity();
  T.middleCols(m, m) = -p.F;
  T.col(z0).setConstant(-1.0);
  T.col(rhs) = p.q;
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = i;

  auto pivot = [&T](int row, int col) {
    const double piv = T(row, col);
    T.row(row) /= piv;
    for (int i = 0; i < T.rows(); ++i) {
      if (i == row) continue;
      const double f = T(i, col);
      if (f != 0.0) T.row(i) -= f * T.row(row);
    }
  };

  int row = 0;
  const double qmin = p.q.minCoeff(&row);
  for (int i = 0; i < m; ++i) {
    if (i != row && p.q(i) <= qmin + kRatioTieTol) run.degenerate = true;
  }
  pivot(row, z0);
  int leaving = basis[row];
  basis[row] = z0;
  int entering = leaving + m;

  const int max_pivots = 50 * m;
  int pivots = 1;
  while (true) {
    if (pivots >= max_pivots) {
      run.solution = Finish(p, Eigen::VectorXd::Zero(m),
                            LcpStatus::kMaxIterations, pivots);
      return run;
    }
    int best = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (T(i, entering) <= kPivotTol) continue;
      const double ratio = T(i, rhs) / T(i, entering);
      if (best < 0 ||
          ratio < best_ratio - kRatioTieTol * (1.0 + std::abs(best_ratio))) {
        best = i;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kRatioTieTol * (1.0 + std::abs(ratio))) {
        run.degenerate = true;
        if (basis[i] == z0) best = i;
      }
    }
    if (best < 0) {
      run.solution = Finish(p, Eigen::VectorXd::Zero(m),
                            LcpStatus::kRayTermination, pivots);
      return run;
    }
    pivot(best, entering);
    ++pivots;
    leaving = basis[best];
    basis[best] = entering;
    if (leaving == z0) break;
    entering = leaving < m ? leaving + m : leaving - m;
  }

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  std::vector<int> active;
  for (int i = 0; i < m; ++i) {
    if (basis[i] >= m && basis[i] < 2 * m) {
      lambda(basis[i] - m) = T(i, rhs);
      active.push_back(basis[i] - m);
    }
  }
  std::sort(active.begin(), active.end());
  RefineOnBasis(p, active, &lambda);
  run.solution = Finish(p, std::move(lambda), LcpStatus::kSolved, pivots);
  return run;
}

}  // namespace

void Lcp::Validate() const {
  if (q.size() < 1) throw SolverError("LCP must have m >= 1");
  if (F.rows() != q.size() || F.cols() != q.size()) {
    throw SolverError("LCP dimension mismatch: q has " +
                      std::to_string(q.size()) + " entries, F is " +
                      std::to_string(F.rows()) + "x" +
                      std::to_string(F.cols()));
  }
  if (!q.allFinite() || !F.allFinite()) {
    throw SolverError("LCP data contains non-finite entries");
  }
}

const char* ToString(LcpStatus status) {
  switch (status) {
    case LcpStatus::kSolved:
      return "solved";
    case LcpStatus::kRayTermination:
      return "ray_termination";
    case LcpStatus::kMaxIterations:
      return "max_iterations";
  }
  return "unknown";
}

bool SatisfiesComplementarity(const LcpSolution& sol, double tol) {
  if (sol.lambda.size() == 0) return true;
  return sol.lambda.minCoeff() >= -tol && sol.y.minCoeff() >= -tol &&
         sol.lambda.dot(sol.y) <= tol;
}

bool IsSymmetricPositiveDefinite(const Eigen::MatrixXd& F, double tol) {
  if (F.rows() != F.cols()) return false;
  const double scale = std::max(1.0, F.cwiseAbs().maxCoeff());
  if ((F - F.transpose()).cwiseAbs().maxCoeff() > tol * scale) return false;
  const Eigen::MatrixXd sym = 0.5 * (F + F.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  return llt.info() == Eigen::Success;
}

LcpSolution SolveLcpLemke(const Lcp& p) {
  p.Validate();
  LemkeRun run = RunLemke(p);
  if (!run.solution.solved() && run.degenerate) {
    Lcp perturbed{p.q + Eigen::VectorXd::Constant(p.size(),
                                                   kDegeneratePerturbation),
                  p.F};
    LemkeRun retry = RunLemke(perturbed);
    if (retry.solution.solved()) {
      Eigen::VectorXd lambda = retry.solution.lambda;
      return Finish(p, std::move(lambda), LcpStatus::kSolved,
                    run.solution.pivots + retry.solution.pivots);
    }
  }
  return run.solution;
}

LcpSolution SolveLcpQp(const Lcp& p) {
  p.Validate();
  const double scale = std::max(1.0, p.F.cwiseAbs().maxCoeff());
  const double asym = (p.F - p.F.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw SolverError("SolveLcpQp requires symmetric F (asymmetry " +
                      std::to_string(asym) + "); use SolveLcpLemke");
  }
  Eigen::MatrixXd sym = 0.5 * (p.F + p.F.transpose());
  if (Eigen::LLT<Eigen::MatrixXd>(sym).info() != Eigen::Success) {
    throw SolverError(
        "SolveLcpQp requires positive definite F; use SolveLcpLemke");
  }
  const QpResult qp =
      SolveConvexQp(ConvexQp::NonNegative(std::move(sym), p.q), 1e-12);
  Eigen::VectorXd lambda = qp.z.cwiseMax(0.0);
  std::vector<int> active;
  for (int i = 0; i < p.size(); ++i) {
    if (lambda(i) > 0.0) active.push_back(i);
  }
  RefineOnBasis(p, active, &lambda);
  const LcpStatus status = qp.status == QpStatus::kOptimal
                               ? LcpStatus::kSolved
                               : LcpStatus::kMaxIterations;
  return Finish(p, std::move(lambda), status, qp.iterations);
}

std::vector<LcpSolution> BruteForceLcp(const Lcp& p) {
  p.Validate();
  const int m = p.size();
  if (m > 12) throw SolverError("BruteForceLcp is limited to m <= 12");
  constexpr double kSignTol = 1e-10;
  std::vector<LcpSolution> found;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    std::vector<int> active;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) active.push_back(i);
    }
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
    if (!active.empty()) {
      const int k = static_cast<int>(active.size());
      Eigen::MatrixXd Faa(k, k);
      Eigen::VectorXd qa(k);
      for (int i = 0; i < k; ++i) {
        qa(i) = p.q(active[i]);
        for (int j = 0; j < k; ++j) Faa(i, j) = p.F(active[i], active[j]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(Faa);
      if (!lu.isInvertible()) continue;
      const Eigen::VectorXd la = lu.solve(-qa);
      for (int i = 0; i < k; ++i) lambda(active[i]) = la(i);
    }
    const Eigen::VectorXd y = p.F * lambda + p.q;
    if (lambda.minCoeff() < -kSignTol || y.minCoeff() < -kSignTol) continue;
    const bool duplicate = std::any_of(
        found.begin(), found.end(), [&lambda](const LcpSolution& s) {
          return (s.lambda - lambda).cwiseAbs().maxCoeff() <= 1e-9;
        });
    if (duplicate) continue;
    LcpSolution sol;
    sol.lambda = lambda;
    sol.y = y;
    sol.comp_residual = lambda.dot(y);
    sol.status = LcpStatus::kSolved;
    found.push_back(std::move(sol));
  }
  return found;
}

}  // namespace acmpc::solvers
