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
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "acmpc/solvers/convex_qp.hpp"
#include "acmpc/solvers/lcp.hpp"
#include "support/qp_oracle.hpp"
#include "support/random.hpp"

namespace acmpc::solvers {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Lcp MakeLcp(std::initializer_list<double> q, const MatrixXd& F) {
  VectorXd qv(q.size());
  int i = 0;
  for (double v : q) qv(i++) = v;
  return Lcp{qv, F};
}

TEST(LcpTest, ValidateRejectsMismatch) {
  EXPECT_THROW((Lcp{VectorXd::Zero(2), MatrixXd::Identity(3, 3)}.Validate()),
               SolverError);
  EXPECT_THROW((Lcp{VectorXd(), MatrixXd()}.Validate()), SolverError);
}

TEST(LemkeTest, NonNegativeQGivesZero) {
  const auto sol = SolveLcpLemke(MakeLcp({1.0, 2.0}, MatrixXd::Identity(2, 2)));
  ASSERT_TRUE(sol.solved());
  EXPECT_EQ(sol.lambda, VectorXd::Zero(2));
  EXPECT_DOUBLE_EQ(sol.y(0), 1.0);
  EXPECT_DOUBLE_EQ(sol.y(1), 2.0);
}

TEST(LemkeTest, ScalarClosedForm) {
  const auto sol = SolveLcpLemke(MakeLcp({-4.0}, MatrixXd::Constant(1, 1, 2.0)));
  ASSERT_TRUE(sol.solved());
  EXPECT_NEAR(sol.lambda(0), 2.0, 1e-14);
  EXPECT_NEAR(sol.y(0), 0.0, 1e-14);
}

TEST(LemkeTest, UnsolvableInstanceEndsOnRay) {
  MatrixXd F(2, 2);
  F << 0, -1, 1, 0;
  const auto sol = SolveLcpLemke(MakeLcp({-1.0, 1.0}, F));
  EXPECT_FALSE(sol.solved());
  EXPECT_EQ(sol.status, LcpStatus::kRayTermination);
}

TEST(LemkeTest, MatchesBruteForceOnRandomSpd) {
  testing::Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = rng.Int(1, 6);
    const Lcp p{rng.Vector(m, -2.0, 2.0), rng.Spd(m)};
    const auto lemke = SolveLcpLemke(p);
    const auto oracle = BruteForceLcp(p);
    ASSERT_TRUE(lemke.solved()) << "trial " << trial;
    ASSERT_EQ(oracle.size(), 1u) << "trial " << trial;
    EXPECT_LE((lemke.lambda - oracle.front().lambda).cwiseAbs().maxCoeff(),
              1e-7);
    EXPECT_TRUE(SatisfiesComplementarity(lemke));
  }
}

TEST(LemkeTest, DeterministicForFixedInput) {
  testing::Rng rng(3);
  const Lcp p{rng.Vector(5, -2.0, 2.0), rng.PositiveDefiniteNonSymmetric(5)};
  const auto a = SolveLcpLemke(p);
  const auto b = SolveLcpLemke(p);
  EXPECT_EQ(a.lambda, b.lambda);
  EXPECT_EQ(a.pivots, b.pivots);
}

TEST(LemkeTest, DegenerateTiesStillSolve) {
  // Repeated rows make every ratio test tie.
  MatrixXd F = MatrixXd::Constant(3, 3, 1.0) + MatrixXd::Identity(3, 3);
  const auto sol = SolveLcpLemke(MakeLcp({-1.0, -1.0, -1.0}, F));
  ASSERT_TRUE(sol.solved());
  EXPECT_TRUE(SatisfiesComplementarity(sol));
}

TEST(LcpQpTest, ScalarCases) {
  EXPECT_NEAR(SolveLcpQp(MakeLcp({1.0}, MatrixXd::Ones(1, 1))).lambda(0), 0.0,
              0.0);
  EXPECT_NEAR(
      SolveLcpQp(MakeLcp({-4.0}, MatrixXd::Constant(1, 1, 2.0))).lambda(0),
      2.0, 1e-14);
}

TEST(LcpQpTest, RejectsNonSymmetricAndIndefinite) {
  MatrixXd skew(2, 2);
  skew << 1, 1, -1, 1;
  EXPECT_THROW(SolveLcpQp(MakeLcp({-1.0, -1.0}, skew)), SolverError);
  MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  EXPECT_THROW(SolveLcpQp(MakeLcp({-1.0, -1.0}, indef)), SolverError);
}

TEST(LcpQpTest, AgreesWithLemkeOnRandomSpd) {
  testing::Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = rng.Int(1, 6);
    const Lcp p{rng.Vector(m, -2.0, 2.0), rng.Spd(m)};
    const auto qp = SolveLcpQp(p);
    const auto lemke = SolveLcpLemke(p);
    ASSERT_TRUE(qp.solved());
    EXPECT_LE((qp.lambda - lemke.lambda).cwiseAbs().maxCoeff(), 1e-7)
        << "trial " << trial;
    EXPECT_TRUE(SatisfiesComplementarity(qp));
  }
}

TEST(BruteForceLcpTest, TrivialInstances) {
  const auto one = BruteForceLcp(MakeLcp({1.0}, MatrixXd::Ones(1, 1)));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].lambda(0), 0.0);

  const auto decoupled =
      BruteForceLcp(MakeLcp({-1.0, -1.0}, MatrixXd::Identity(2, 2)));
  ASSERT_EQ(decoupled.size(), 1u);
  EXPECT_NEAR(decoupled[0].lambda(0), 1.0, 1e-15);
  EXPECT_NEAR(decoupled[0].lambda(1), 1.0, 1e-15);
}

TEST(BruteForceLcpTest, NonPMatrixHandEnumeration) {
  // Active sets: {} gives y = q with y0 < 0; {0} and {1} are singular;
  // {0,1} forces lambda1 = -1. No complementary solution exists.
  MatrixXd F(2, 2);
  F << 0, -1, 1, 0;
  EXPECT_TRUE(BruteForceLcp(MakeLcp({-1.0, 1.0}, F)).empty());
}

TEST(BruteForceLcpTest, SingularPrincipalMinorsAreSkipped) {
  // F = [[0,1],[1,0]], q = [-1,-1]: both singleton bases are singular and
  // skipped; the full basis gives lambda = (1, 1).
  MatrixXd F(2, 2);
  F << 0, 1, 1, 0;
  const auto sols = BruteForceLcp(MakeLcp({-1.0, -1.0}, F));
  ASSERT_EQ(sols.size(), 1u);
  EXPECT_NEAR(sols[0].lambda(0), 1.0, 1e-15);
  EXPECT_NEAR(sols[0].lambda(1), 1.0, 1e-15);
}

TEST(BruteForceLcpTest, UniqueForPMatrices) {
  testing::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = rng.Int(1, 6);
    const Lcp p{rng.Vector(m, -2.0, 2.0), rng.PositiveDefiniteNonSymmetric(m)};
    EXPECT_EQ(BruteForceLcp(p).size(), 1u);
  }
}

TEST(ConvexQpTest, SeparableProjection) {
  const auto r = SolveConvexQp(
      ConvexQp::NonNegative(MatrixXd::Identity(2, 2), VectorXd::Constant(2, -1)),
      1e-10);
  EXPECT_EQ(r.status, QpStatus::kOptimal);
  EXPECT_NEAR(r.z(0), 1.0, 1e-14);
  EXPECT_NEAR(r.z(1), 1.0, 1e-14);
}

TEST(ConvexQpTest, ConstrainedAtBound) {
  const auto r = SolveConvexQp(
      ConvexQp::NonNegative(MatrixXd::Identity(2, 2), VectorXd::Constant(2, 1)),
      1e-10);
  EXPECT_EQ(r.status, QpStatus::kOptimal);
  EXPECT_EQ(r.z, VectorXd::Zero(2));
}

TEST(ConvexQpTest, FreeCoordinatesAndSingularHessian) {
  // min 0.5 z0^2 - z0 + z1 with z1 >= 0 and z0 free; H is singular.
  ConvexQp p;
  p.H = MatrixXd::Zero(2, 2);
  p.H(0, 0) = 1.0;
  p.g = VectorXd(2);
  p.g << -1.0, 1.0;
  p.lower = VectorXd(2);
  p.lower << -std::numeric_limits<double>::infinity(), 0.0;
  const auto r = SolveConvexQp(p, 1e-10);
  EXPECT_EQ(r.status, QpStatus::kOptimal);
  EXPECT_NEAR(r.z(0), 1.0, 1e-14);
  EXPECT_EQ(r.z(1), 0.0);
}

TEST(ConvexQpTest, DetectsUnboundedDirection) {
  ConvexQp p;
  p.H = MatrixXd::Zero(1, 1);
  p.g = VectorXd::Constant(1, -1.0);
  p.lower = VectorXd::Zero(1);
  EXPECT_EQ(SolveConvexQp(p, 1e-10).status, QpStatus::kUnbounded);
}

TEST(ConvexQpTest, RejectsIndefiniteHessian) {
  MatrixXd H(2, 2);
  H << 1, 0, 0, -1;
  EXPECT_THROW(SolveConvexQp(ConvexQp::NonNegative(H, VectorXd::Zero(2)), 1e-8),
               SolverError);
}

TEST(ConvexQpTest, MatchesActiveSetEnumeration) {
  testing::Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = rng.Int(1, 6);
    const MatrixXd H = rng.Spd(n, 0.05);
    const VectorXd g = rng.Vector(n, -3.0, 3.0);
    const auto r = SolveConvexQp(ConvexQp::NonNegative(H, g), 1e-12);
    const auto oracle = testing::EnumerateNonNegativeQp(H, g);
    ASSERT_TRUE(oracle.has_value());
    ASSERT_EQ(r.status, QpStatus::kOptimal);
    EXPECT_LE((r.z - *oracle).cwiseAbs().maxCoeff(), 1e-9) << "trial " << trial;
  }
}

TEST(ConvexQpTest, ObjectiveBeatsRandomFeasiblePoints) {
  testing::Rng rng(15);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.Int(1, 8);
    const ConvexQp p = ConvexQp::NonNegative(rng.Spd(n, 0.0),
                                             rng.Vector(n, -3.0, 3.0));
    const auto r = SolveConvexQp(p, 1e-10);
    const double best = p.Objective(r.z);
    for (int k = 0; k < 100; ++k) {
      const VectorXd z = rng.Vector(n, 0.0, 3.0);
      EXPECT_LE(best, p.Objective(z) + 1e-12);
    }
  }
}

TEST(ConvexQpTest, IllConditionedImplicitLossScale) {
  // Curvature ratios around 1e9, as in the residual learner's inner problem.
  testing::Rng rng(16);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.Int(2, 6);
    MatrixXd H = rng.Spd(n, 1e-2);
    H.topLeftCorner(n / 2, n / 2) *= 1e9;
    H = 0.5 * (H + H.transpose()).eval();
    if (Eigen::LLT<MatrixXd>(H).info() != Eigen::Success) continue;
    const VectorXd g = rng.Vector(n, -1e8, 1e8);
    const auto r = SolveConvexQp(ConvexQp::NonNegative(H, g), 1e-8);
    EXPECT_EQ(r.status, QpStatus::kOptimal) << "trial " << trial;
    EXPECT_GE(r.z.minCoeff(), 0.0);
  }
}

TEST(ConvexQpTest, ConcurrentCallsAreIndependent) {
  testing::Rng rng(17);
  const ConvexQp p = ConvexQp::NonNegative(rng.Spd(5), rng.Vector(5));
  const auto reference = SolveConvexQp(p, 1e-12);
  std::vector<std::thread> threads;
  std::vector<VectorXd> out(4);
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] { out[t] = SolveConvexQp(p, 1e-12).z; });
  }
  for (auto& th : threads) th.join();
  for (const auto& z : out) EXPECT_EQ(z, reference.z);
}

}  // namespace
}  // namespace acmpc::solvers
