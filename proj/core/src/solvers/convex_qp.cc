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

#include "acmpc/solvers/convex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "acmpc/solvers/lcp.hpp"

namespace acmpc::solvers {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double Scale(const ConvexQp& p, const Eigen::VectorXd& z) {
  const double h = p.H.size() ? p.H.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  const double zn = z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
  const double gn = p.g.size() ? p.g.cwiseAbs().maxCoeff() : 0.0;
  return std::max({1.0, h * zn, gn});
}

bool AtBound(const ConvexQp& p, const Eigen::VectorXd& z, int i) {
  return std::isfinite(p.lower(i)) && z(i) <= p.lower(i);
}

}  // namespace

ConvexQp ConvexQp::NonNegative(Eigen::MatrixXd H, Eigen::VectorXd g) {
  const auto n = g.size();
  return ConvexQp{std::move(H), std::move(g), Eigen::VectorXd::Zero(n)};
}

void ConvexQp::Validate() const {
  const auto n = g.size();
  if (H.rows() != n || H.cols() != n || lower.size() != n) {
    throw SolverError("ConvexQp dimension mismatch");
  }
  if (n == 0) return;
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw SolverError("ConvexQp Hessian is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      H + 1e-10 * Eigen::MatrixXd::Identity(n, n), Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-9 * scale) {
    throw SolverError("ConvexQp Hessian is not PSD (min eigenvalue " +
                      std::to_string(min_eig) + ")");
  }
}

double ConvexQp::Objective(const Eigen::VectorXd& z) const {
  return 0.5 * z.dot(H * z) + g.dot(z);
}

const char* ToString(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal:
      return "optimal";
    case QpStatus::kMaxIterations:
      return "max_iterations";
    case QpStatus::kUnbounded:
      return "unbounded";
  }
  return "unknown";
}

Eigen::VectorXd ProjectedGradient(const ConvexQp& p, const Eigen::VectorXd& z) {
  Eigen::VectorXd grad = p.H * z + p.g;
  for (int i = 0; i < grad.size(); ++i) {
    if (AtBound(p, z, i)) grad(i) = std::min(0.0, grad(i));
  }
  return grad;
}

QpResult SolveConvexQp(const ConvexQp& p, double tol,
                       const std::optional<Eigen::VectorXd>& initial) {
  p.Validate();
  if (!(tol > 0.0)) throw SolverError("SolveConvexQp requires tol > 0");
  const int n = p.size();
  QpResult result;
  result.z = Eigen::VectorXd::Zero(n);
  if (n == 0) return result;

  Eigen::VectorXd z =
      initial && initial->size() == n ? *initial : Eigen::VectorXd::Zero(n);
  z = z.cwiseMax(p.lower);

  // Working set: bounded coordinates pinned at their bound.
  std::vector<bool> pinned(n, false);
  for (int i = 0; i < n; ++i) {
    if (AtBound(p, z, i)) {
      pinned[i] = true;
      z(i) = p.lower(i);
    }
  }

  // Set after an unblocked Newton step: z is then the subspace minimizer and
  // only the multiplier test remains.
  bool at_subspace_min = false;
  int iter = 0;
  for (; iter < kQpIterationCap; ++iter) {
    std::vector<int> free_idx;
    for (int i = 0; i < n; ++i) {
      if (!pinned[i]) free_idx.push_back(i);
    }
    const Eigen::VectorXd grad = p.H * z + p.g;
    const int nf = static_cast<int>(free_idx.size());

    Eigen::VectorXd step = Eigen::VectorXd::Zero(n);
    bool has_step = false;
    if (nf > 0 && !at_subspace_min) {
      Eigen::MatrixXd Hff(nf, nf);
      Eigen::VectorXd gf(nf);
      for (int a = 0; a < nf; ++a) {
        gf(a) = grad(free_idx[a]);
        for (int b = 0; b < nf; ++b) Hff(a, b) = p.H(free_idx[a], free_idx[b]);
      }
      Eigen::VectorXd pf;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(Hff);
      const double gscale = std::max(1.0, gf.cwiseAbs().maxCoeff());
      bool newton_ok = ldlt.info() == Eigen::Success && ldlt.isPositive();
      if (newton_ok) {
        pf = ldlt.solve(-gf);
        newton_ok = pf.allFinite() &&
                    (Hff * pf + gf).cwiseAbs().maxCoeff() <= 1e-9 * gscale;
      }
      if (!newton_ok) {
        // Singular subspace: take the minimum-norm Newton step, or follow the
        // zero-curvature descent direction if the gradient leaves the range.
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(Hff);
        pf = cod.solve(-gf);
        const Eigen::VectorXd resid = Hff * pf + gf;
        if (resid.cwiseAbs().maxCoeff() > 1e-9 * gscale) {
          pf = -resid;
          // Scale so the linear model makes a unit step meaningful.
          double alpha = kInf;
          for (int a = 0; a < nf; ++a) {
            const int i = free_idx[a];
            if (pf(a) < 0.0 && std::isfinite(p.lower(i))) {
              alpha = std::min(alpha, (p.lower(i) - z(i)) / pf(a));
            }
          }
          if (!std::isfinite(alpha)) {
            result.z = z;
            result.iterations = iter;
            result.status = QpStatus::kUnbounded;
            result.kkt_residual =
                ProjectedGradient(p, z).cwiseAbs().maxCoeff();
            return result;
          }
          pf *= alpha;
        }
      }
      for (int a = 0; a < nf; ++a) step(free_idx[a]) = pf(a);
      const double zscale = std::max(1.0, z.cwiseAbs().maxCoeff());
      has_step = step.cwiseAbs().maxCoeff() > 1e-14 * zscale;
    }

    if (!has_step) {
      // Subspace minimizer reached: release the most negative multiplier.
      int release = -1;
      double most_negative = 0.0;
      const double thresh = -tol * Scale(p, z);
      for (int i = 0; i < n; ++i) {
        if (pinned[i] && grad(i) < thresh && grad(i) < most_negative) {
          most_negative = grad(i);
          release = i;
        }
      }
      if (release < 0) break;
      pinned[release] = false;
      at_subspace_min = false;
      continue;
    }

    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < n; ++i) {
      if (pinned[i] || step(i) >= 0.0 || !std::isfinite(p.lower(i))) continue;
      const double a = (p.lower(i) - z(i)) / step(i);
      if (a < alpha) {
        alpha = a;
        blocking = i;
      }
    }
    z += std::max(0.0, alpha) * step;
    if (blocking >= 0) {
      z(blocking) = p.lower(blocking);
      pinned[blocking] = true;
    } else {
      at_subspace_min = true;
    }
    for (int i = 0; i < n; ++i) {
      if (std::isfinite(p.lower(i)) && z(i) < p.lower(i)) z(i) = p.lower(i);
    }
  }

  result.z = z;
  result.iterations = iter;
  result.kkt_residual = ProjectedGradient(p, z).cwiseAbs().maxCoeff();
  result.status = result.kkt_residual <= tol * Scale(p, z)
                      ? QpStatus::kOptimal
                      : QpStatus::kMaxIterations;
  return result;
}

}  // namespace acmpc::solvers
