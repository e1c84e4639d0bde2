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

#ifndef ACMPC_SOLVERS_LCP_HPP_
#define ACMPC_SOLVERS_LCP_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace acmpc::solvers {

// Absolute tolerance on sign and complementarity conditions of an LCP
// solution. Matrices in this library are O(1) after time-step scaling.
inline constexpr double kComplementarityTol = 1e-8;

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// LCP(q, F): find lambda >= 0 with y = F lambda + q >= 0 and lambda'y = 0.
struct Lcp {
  Eigen::VectorXd q;
  Eigen::MatrixXd F;

  int size() const { return static_cast<int>(q.size()); }
  // Throws SolverError when dimensions disagree or m == 0.
  void Validate() const;
};

enum class LcpStatus { kSolved, kRayTermination, kMaxIterations };

const char* ToString(LcpStatus status);

struct LcpSolution {
  Eigen::VectorXd lambda;
  Eigen::VectorXd y;
  double comp_residual = 0.0;
  LcpStatus status = LcpStatus::kSolved;
  int pivots = 0;

  bool solved() const { return status == LcpStatus::kSolved; }
};

// Checks the solved-status contract: min(lambda), min(y) >= -tol and
// lambda'y <= tol.
bool SatisfiesComplementarity(const LcpSolution& sol,
                              double tol = kComplementarityTol);

// Complementary pivoting with covering vector e = (1, ..., 1). Ratio-test
// ties are broken by the lowest row index (z0 preferred when it is tied).
// Gives up after 50 * m pivots; a degenerate failure is retried once with q
// perturbed by 1e-12.
LcpSolution SolveLcpLemke(const Lcp& p);

// Solves min 0.5 l'Fl + q'l s.t. l >= 0, whose KKT system is LCP(q, F).
// Requires F symmetric (within 1e-9) and positive definite; throws
// SolverError otherwise.
LcpSolution SolveLcpQp(const Lcp& p);

// Enumerates every one of the 2^m complementary bases. Singular principal
// subsystems are skipped. Intended as a test oracle; m <= 12.
std::vector<LcpSolution> BruteForceLcp(const Lcp& p);

// True if F == F' within `tol` relative to max(1, |F|_inf) and F + F' is
// positive definite.
bool IsSymmetricPositiveDefinite(const Eigen::MatrixXd& F, double tol = 1e-9);

}  // namespace acmpc::solvers

#endif  // ACMPC_SOLVERS_LCP_HPP_
