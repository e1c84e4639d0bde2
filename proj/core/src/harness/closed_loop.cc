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

#include "acmpc/harness/closed_loop.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <random>
#include <thread>

#include "acmpc/adapt/learner.hpp"
#include "acmpc/c3/c3.hpp"

namespace acmpc::harness {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Owns the optimizer state and the augmenter cache; one instance per run.
class Learner {
 public:
  Learner(const ExperimentConfig& cfg, const ModelSide& model)
      : cfg_(cfg.learn),
        augmenter_(model.LearnerLinearizer()),
        state_(adapt::OptimizerState::Zero(cfg.num_lambda())) {}

  // Runs one update from `current` and returns the snapshot to publish, or
  // null when the update failed or had no data.
  std::shared_ptr<const ResidualSnapshot> Update(const adapt::Buffer& buffer,
                                                 const ResidualSnapshot& current,
                                                 UpdateRecord* rec) {
    rec->index = index_++;
    rec->step = buffer.empty() ? -1 : buffer.points().back().k;
    rec->r = current.r.r_comp;
    rec->version = current.version;
    try {
      const adapt::UpdateResult res =
          adapt::AdaptUpdate(buffer, current.r, state_, augmenter_, cfg_);
      rec->loss = res.loss;
      rec->grad_norm = res.grad_norm;
      rec->update_ms = res.update_ms;
      rec->skipped = res.skipped;
      if (res.no_op) return nullptr;
      state_ = res.state;
      auto next = std::make_shared<const ResidualSnapshot>(
          ResidualSnapshot::Make(res.residual, current.version + 1, res.loss));
      rec->r = next->r.r_comp;
      rec->version = next->version;
      return next;
    } catch (const std::exception&) {
      rec->failed = true;
      return nullptr;
    }
  }

 private:
  adapt::LearnConfig cfg_;
  adapt::Augmenter augmenter_;
  adapt::OptimizerState state_;
  std::int64_t index_ = 0;
};

// Steps at which a disturbance kick lands, with its sign.
class Kicks {
 public:
  explicit Kicks(const ExperimentConfig& cfg) : d_(cfg.disturbances), dt_(cfg.dt()) {}

  // Signed amplitude applied at `step`, zero when none.
  double At(std::int64_t step) const {
    if (!d_.enabled()) return 0.0;
    const std::int64_t first = std::llround(d_.start_s / dt_);
    const std::int64_t period = std::max<std::int64_t>(1, std::llround(d_.period_s / dt_));
    const std::int64_t stop = std::llround(d_.stop_s / dt_);
    if (step < first || step >= stop || (step - first) % period != 0) return 0.0;
    const std::int64_t j = (step - first) / period;
    return (d_.alternate && j % 2 == 1) ? -d_.amplitude : d_.amplitude;
  }

  // First step after the last kick; 0 when disabled.
  std::int64_t QuietFrom(std::int64_t steps) const {
    std::int64_t last = -1;
    if (d_.enabled()) {
      for (std::int64_t k = 0; k < steps; ++k) {
        if (At(k) != 0.0) last = k;
      }
    }
    return last + 1;
  }

 private:
  Disturbances d_;
  double dt_;
};

class Observer {
 public:
  explicit Observer(const ExperimentConfig& cfg) : std_(cfg.noise_std), rng_(cfg.seed) {}

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) {
    Eigen::VectorXd y = x;
    if (std_.size() == 0) return y;
    for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += std_(i) * normal_(rng_);
    return y;
  }

 private:
  Eigen::VectorXd std_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

RunResult Run(const ExperimentConfig& cfg, Plant& plant, const ModelSide& model) {
  cfg.Validate();
  const bool realtime = cfg.mode == RunMode::kRealtime;
  const bool timing = realtime || cfg.record_timing;
  const int steps = cfg.steps();
  const int nl = cfg.num_lambda();
  const int every = cfg.adapt_every();

  c3::MpcConfig mpc = ResolveMpcConfig(cfg);
  c3::C3Controller controller(mpc);
  Observer observe(cfg);
  const Kicks kicks(cfg);

  SnapshotChannel<ResidualSnapshot> residuals;
  residuals.Publish(std::make_shared<const ResidualSnapshot>(
      ResidualSnapshot::Make(lcs::Residual::Zero(nl), 0, 0.0)));
  SnapshotChannel<adapt::Buffer> buffers;

  RunResult out;
  out.log.reserve(static_cast<std::size_t>(steps));
  out.solves.reserve(static_cast<std::size_t>(steps));

  Learner learner(cfg, model);
  adapt::Buffer buffer(cfg.learn.n_b);

  // Realtime learner loop. Reads buffer snapshots, publishes residuals.
  std::atomic<bool> stop{false};
  std::vector<UpdateRecord> rt_updates;
  std::thread learner_thread;
  const auto t0 = Clock::now();
  if (realtime && cfg.adapt) {
    learner_thread = std::thread([&] {
      const auto period = std::chrono::duration_cast<Clock::duration>(
          std::chrono::duration<double>(1.0 / cfg.adapt_hz));
      auto next = t0;
      while (!stop.load()) {
        next += period;
        std::this_thread::sleep_until(next);
        const auto buf = buffers.Latest();
        if (!buf || buf->empty()) continue;
        const auto current = residuals.Latest();
        UpdateRecord rec;
        auto snap = learner.Update(*buf, *current, &rec);
        if (snap) residuals.Publish(std::move(snap));
        rt_updates.push_back(std::move(rec));
      }
    });
  }

  const auto control_period = std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(1.0 / cfg.control_hz));
  Eigen::VectorXd x = cfg.x0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(cfg.num_inputs());
  Eigen::VectorXd obs = observe(x);
  try {
    for (int k = 0; k < steps; ++k) {
      if (realtime) std::this_thread::sleep_until(t0 + k * control_period);
      const auto loop_start = Clock::now();
      if (const double kick = kicks.At(k); kick != 0.0) {
        x(cfg.disturbances.state_index) += kick;
        obs = observe(x);
      }
      // One residual read per period.
      const std::shared_ptr<const ResidualSnapshot> snap = residuals.Latest();

      LogRecord rec;
      rec.step = k;
      rec.t = k * cfg.dt();
      rec.x = x;
      rec.x_obs = obs;
      rec.r = snap->r.r_comp;
      rec.loss = snap->loss;
      rec.residual_version = snap->version;
      rec.residual_checksum = snap->checksum;

      SolveRecord srec;
      srec.step = k;
      try {
        controller.mutable_config().x_ref = model.Reference(k, obs, snap->r);
        const lcs::LcsParams theta = model.Linearize(obs, u);
        const c3::MpcPlan plan = controller.Solve(obs, theta, snap->r);
        u = plan.u0();
        const lcs::StepResult target = c3::PlanToTarget(obs, u, theta, snap->r);
        rec.x_d = target.next.x;
        rec.lambda_d = target.lambda;
        srec.solve_ms = timing ? plan.solve_ms : 0.0;
        srec.primal_residual = plan.primal_residual.back();
        srec.dual_residual = plan.dual_residual.back();
        srec.admm_iterations = static_cast<int>(plan.primal_residual.size());
        srec.engaged_modes = plan.engaged_modes;
      } catch (const std::exception&) {
        // Hold the previous input for this period.
        rec.controller_failed = true;
        srec.failed = true;
        controller.Reset();
      }
      srec.u0 = u;
      rec.u = u;
      rec.solve_ms = srec.solve_ms;

      const PlantStep ps = plant.Step(x, u);
      rec.lambda = ps.lambda;
      const Eigen::VectorXd obs_next = observe(ps.x_next);
      buffer.Push(adapt::DataPoint{obs_next, obs, u, k});
      if (cfg.adapt) {
        if (realtime) {
          buffers.Publish(std::make_shared<const adapt::Buffer>(buffer));
        } else if ((k + 1) % every == 0) {
          UpdateRecord urec;
          auto next = learner.Update(buffer, *snap, &urec);
          if (next) residuals.Publish(std::move(next));
          if (!timing) urec.update_ms = 0.0;
          out.updates.push_back(std::move(urec));
        }
      }
      x = ps.x_next;
      obs = obs_next;
      if (timing) {
        rec.loop_ms = MsSince(loop_start);
        rec.wall_ms = MsSince(t0);
      }
      out.log.push_back(std::move(rec));
      out.solves.push_back(std::move(srec));
    }
  } catch (...) {
    stop.store(true);
    if (learner_thread.joinable()) learner_thread.join();
    throw;
  }
  stop.store(true);
  if (learner_thread.joinable()) learner_thread.join();
  if (realtime) out.updates = std::move(rt_updates);
  out.summary = Evaluate(cfg, out);
  return out;
}

}  // namespace

std::uint64_t Checksum(const Eigen::VectorXd& v) {
  std::uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(v.data());
  const std::size_t n = static_cast<std::size_t>(v.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

ResidualSnapshot ResidualSnapshot::Make(lcs::Residual r, std::uint64_t version,
                                        double loss) {
  ResidualSnapshot s;
  s.checksum = Checksum(r.r_comp);
  s.r = std::move(r);
  s.version = version;
  s.loss = loss;
  return s;
}

double Percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

RunSummary Evaluate(const ExperimentConfig& cfg, const RunResult& run) {
  RunSummary s;
  s.experiment = cfg.experiment;
  s.mode = cfg.mode;
  s.adapt = cfg.adapt;
  s.seed = cfg.seed;
  s.steps = static_cast<std::int64_t>(run.log.size());
  s.updates = static_cast<std::int64_t>(run.updates.size());
  for (const auto& r : run.log) s.controller_failures += r.controller_failed;
  for (const auto& u : run.updates) s.learner_failures += u.failed;

  const SuccessCriteria& sc = cfg.success;
  s.residual_target = ResidualTarget(cfg);
  s.residual_final = run.log.empty() ? Eigen::VectorXd::Zero(cfg.num_lambda())
                                     : run.log.back().r;

  std::vector<double> solve_ms, update_ms;
  for (const auto& r : run.solves) {
    if (!r.failed) solve_ms.push_back(r.solve_ms);
  }
  for (const auto& u : run.updates) {
    if (!u.failed) update_ms.push_back(u.update_ms);
  }
  s.solve_ms_p50 = Percentile(solve_ms, 0.5);
  s.solve_ms_p95 = Percentile(solve_ms, 0.95);
  s.update_ms_p50 = Percentile(update_ms, 0.5);
  s.update_ms_p95 = Percentile(update_ms, 0.95);

  // Residual history: one entry per learner update, or the constant zero
  // residual when the learner is off.
  std::vector<Eigen::VectorXd> history;
  for (const auto& u : run.updates) {
    if (!u.failed) history.push_back(u.r);
  }
  if (history.empty()) history.push_back(s.residual_final);

  if (cfg.experiment == ExperimentId::kCartpoleWalls) {
    const std::int64_t quiet = Kicks(cfg).QuietFrom(s.steps);
    int held = 0;
    for (const auto& r : run.log) {
      if (r.step < quiet) continue;
      if (r.x.cwiseAbs().maxCoeff() < sc.state_tol) {
        if (++held == sc.hold_steps) {
          s.stabilized = true;
          s.stabilized_step = r.step - sc.hold_steps + 1;
          break;
        }
      } else {
        held = 0;
      }
    }
    const int needed = run.updates.empty() ? 1 : sc.hold_updates;
    held = 0;
    for (std::size_t i = 0; i < history.size(); ++i) {
      if ((history[i] - s.residual_target).cwiseAbs().maxCoeff() < sc.residual_tol) {
        if (++held == needed && !s.residual_converged) {
          s.residual_converged = true;
          s.residual_converged_update = static_cast<std::int64_t>(i) - needed + 1;
        }
      } else {
        held = 0;
      }
    }
    s.residual_error = (s.residual_final - s.residual_target).cwiseAbs().maxCoeff();
    s.residual_window_mean = s.residual_final;
    s.success = s.stabilized && s.residual_converged;
  } else {
    const Eigen::Vector2d tangent = PathTangent(cfg);
    const Eigen::Vector2d start = PathPoint(cfg, 0.0);
    const double L = cfg.task.path_length;
    for (const auto& r : run.log) {
      const Eigen::Vector2d d = r.x.segment<2>(2) - start;
      const double along = d.dot(tangent);
      const double lateral = std::abs(tangent.x() * d.y() - tangent.y() * d.x());
      if (lateral > cfg.task.corridor) break;
      s.path_progress = std::max(s.path_progress, std::clamp(along, 0.0, L));
    }
    s.path_required = sc.path_fraction * L;
    s.path_success = s.path_progress >= s.path_required;

    const auto n = static_cast<std::int64_t>(history.size());
    const std::int64_t w = std::max<std::int64_t>(
        1, std::llround(sc.residual_window * static_cast<double>(n)));
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(history.front().size());
    for (std::int64_t i = n - w; i < n; ++i) mean += history[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(w);
    s.residual_window_mean = mean;
    s.residual_error =
        ((mean - s.residual_target).array().abs() / s.residual_target.array().abs())
            .maxCoeff();
    s.residual_converged = s.residual_error <= sc.residual_rel_tol;
    s.success = s.path_success;
  }
  return s;
}

RunResult RunClosedLoop(const ExperimentConfig& cfg) {
  cfg.Validate();
  auto plant = MakePlant(cfg);
  auto model = MakeModelSide(cfg);
  return Run(cfg, *plant, *model);
}

RunResult RunClosedLoop(const ExperimentConfig& cfg, Plant& plant,
                        const ModelSide& model) {
  return Run(cfg, plant, model);
}

}  // namespace acmpc::harness
