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

#include "acmpc/harness/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "acmpc/c3/lq.hpp"
#include "acmpc/models/anitescu.hpp"
#include "acmpc/models/cartpole_walls.hpp"
#include "acmpc/models/pusher_ball.hpp"

namespace acmpc::harness {
namespace {

// Keeps the finger heading along the path when the ball sits on its target.
constexpr double kTangentBias = 0.01;

class CartpolePlant final : public Plant {
 public:
  explicit CartpolePlant(const models::CartpoleWallsParams& p)
      : truth_(models::CartpoleWallsLcs(p).truth) {}

  PlantStep Step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) override {
    const lcs::StepResult s =
        lcs::LcsStep(lcs::LcsState{x, 0}, u, truth_, lcs::Residual::Zero(2));
    return {s.next.x, s.lambda};
  }

 private:
  lcs::LcsParams truth_;
};

class PusherPlant final : public Plant {
 public:
  explicit PusherPlant(const models::PusherBallParams& p)
      : truth_(p, p.radius_true) {}

  PlantStep Step(const Eigen::VectorXd& x, const Eigen::VectorXd& u) override {
    const models::AnitescuResult s =
        models::AnitescuStep(truth_, models::Positions(truth_, x),
                             models::Velocities(truth_, x), u);
    return {models::StackState(s.q_next, s.v_next), s.lambda};
  }

 private:
  models::PusherBallModel truth_;
};

class CartpoleModelSide final : public ModelSide {
 public:
  explicit CartpoleModelSide(const ExperimentConfig& cfg)
      : prior_(models::CartpoleWallsLcs(cfg.cartpole).prior),
        ref_(cfg.mpc.Reference(4)) {}

  lcs::LcsParams Linearize(const Eigen::VectorXd&,
                           const Eigen::VectorXd&) const override {
    return prior_;
  }
  adapt::Linearizer LearnerLinearizer() const override {
    return adapt::ConstantLinearizer(prior_);
  }
  Eigen::VectorXd Reference(std::int64_t, const Eigen::VectorXd&,
                            const lcs::Residual&) const override {
    return ref_;
  }

 private:
  lcs::LcsParams prior_;
  Eigen::VectorXd ref_;
};

class PusherModelSide final : public ModelSide {
 public:
  explicit PusherModelSide(const ExperimentConfig& cfg)
      : cfg_(cfg),
        prior_(std::make_shared<const models::PusherBallModel>(
            cfg.pusher, cfg.pusher.radius_prior)) {}

  lcs::LcsParams Linearize(const Eigen::VectorXd& x,
                           const Eigen::VectorXd& u) const override {
    return models::Linearize(*prior_, x, u);
  }

  adapt::Linearizer LearnerLinearizer() const override {
    auto prior = prior_;
    return [prior](const adapt::DataPoint& pt) {
      return models::Linearize(*prior, pt.x, pt.u);
    };
  }

  // Ball target leads by one horizon along the path; the finger target sits
  // push_depth inside the modeled surface, on the far side of the ball from
  // the ball target. The modeled radius includes the learned gap shift.
  Eigen::VectorXd Reference(std::int64_t step, const Eigen::VectorXd& x_obs,
                            const lcs::Residual& r) const override {
    const auto& task = cfg_.task;
    const double dt = cfg_.pusher.dt;
    const double t = static_cast<double>(step) * dt;
    const double s_lead = task.path_speed * (t + cfg_.mpc.horizon * dt);
    const double s = std::min(task.path_length, s_lead);
    const Eigen::Vector2d tangent = PathTangent(cfg_);
    const Eigen::Vector2d ball_ref = PathPoint(cfg_, s);
    const Eigen::Vector2d ball = x_obs.segment<2>(2);
    const Eigen::Vector2d dir =
        (ball_ref - ball + kTangentBias * tangent).normalized();
    const double radius = cfg_.pusher.radius_prior - r.r_comp.mean() * dt;

    Eigen::VectorXd ref = Eigen::VectorXd::Zero(8);
    ref.head<2>() = ball - (radius - task.push_depth) * dir;
    ref.segment<2>(2) = ball_ref;
    if (s_lead < task.path_length) ref.segment<2>(6) = task.path_speed * tangent;
    return ref;
  }

 private:
  ExperimentConfig cfg_;
  std::shared_ptr<const models::PusherBallModel> prior_;
};

}  // namespace

ExperimentConfig StripTruth(const ExperimentConfig& cfg) {
  ExperimentConfig out = cfg;
  out.cartpole.delta_phi.setZero();
  out.pusher.radius_true = out.pusher.radius_prior;
  return out;
}

std::unique_ptr<Plant> MakePlant(const ExperimentConfig& cfg) {
  if (cfg.experiment == ExperimentId::kCartpoleWalls) {
    return std::make_unique<CartpolePlant>(cfg.cartpole);
  }
  return std::make_unique<PusherPlant>(cfg.pusher);
}

std::unique_ptr<ModelSide> MakeModelSide(const ExperimentConfig& cfg) {
  const ExperimentConfig prior = StripTruth(cfg);
  if (prior.experiment == ExperimentId::kCartpoleWalls) {
    return std::make_unique<CartpoleModelSide>(prior);
  }
  return std::make_unique<PusherModelSide>(prior);
}

c3::MpcConfig ResolveMpcConfig(const ExperimentConfig& cfg) {
  c3::MpcConfig m = cfg.mpc;
  if (cfg.terminal_from_dare) {
    const auto model = MakeModelSide(cfg);
    const lcs::LcsParams theta =
        model->Linearize(cfg.x0, Eigen::VectorXd::Zero(cfg.num_inputs()));
    m.Q_N = c3::SolveDare(theta.A, theta.B, m.Q, m.R);
  }
  return m;
}

Eigen::VectorXd PusherGapShift(const models::PusherBallParams& p) {
  const models::PusherBallModel truth(p, p.radius_true);
  const models::PusherBallModel prior(p, p.radius_prior);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(8);
  x(0) = -p.radius_true;
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  return models::Linearize(truth, x, u).c - models::Linearize(prior, x, u).c;
}

Eigen::VectorXd ResidualTarget(const ExperimentConfig& cfg) {
  if (cfg.experiment == ExperimentId::kCartpoleWalls) return cfg.cartpole.delta_phi;
  return PusherGapShift(cfg.pusher);
}

Eigen::Vector2d PathTangent(const ExperimentConfig& cfg) {
  return {std::cos(cfg.task.heading), std::sin(cfg.task.heading)};
}

Eigen::Vector2d PathPoint(const ExperimentConfig& cfg, double s) {
  return cfg.x0.segment<2>(2) + s * PathTangent(cfg);
}

}  // namespace acmpc::harness
