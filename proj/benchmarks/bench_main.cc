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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "acmpc/adapt/learner.hpp"
#include "acmpc/c3/c3.hpp"
#include "acmpc/harness/closed_loop.hpp"
#include "acmpc/harness/config.hpp"
#include "acmpc/harness/experiment.hpp"

namespace {

using acmpc::harness::ExperimentConfig;

ExperimentConfig Load(const char* name) {
  return acmpc::harness::LoadConfig(std::string(ACMPC_SOURCE_DIR) + "/configs/" + name);
}

const char* ConfigName(int which) {
  return which == 0 ? "cartpole_walls.json" : "pusher_ball.json";
}

// Argument: 0 = cart-pole, 1 = pusher-ball.

// States and inputs visited by a short adaptive closed-loop run.
struct Trace {
  ExperimentConfig cfg;
  acmpc::harness::RunResult run;
};

const Trace& GetTrace(int which) {
  static Trace traces[2];
  Trace& t = traces[which];
  if (t.run.log.empty()) {
    t.cfg = Load(ConfigName(which));
    t.cfg.duration_s = 3.0;
    t.run = acmpc::harness::RunClosedLoop(t.cfg);
  }
  return t;
}

void BM_C3Solve(benchmark::State& state) {
  const Trace& t = GetTrace(static_cast<int>(state.range(0)));
  const auto model = acmpc::harness::MakeModelSide(t.cfg);
  acmpc::c3::C3Controller controller(acmpc::harness::ResolveMpcConfig(t.cfg));
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& rec = t.run.log[k];
    controller.mutable_config().x_ref =
        model->Reference(rec.step, rec.x_obs, acmpc::lcs::Residual{rec.r});
    const acmpc::lcs::LcsParams theta = model->Linearize(rec.x_obs, rec.u);
    benchmark::DoNotOptimize(controller.Solve(rec.x_obs, theta, acmpc::lcs::Residual{rec.r}));
    k = (k + 1) % t.run.log.size();
  }
}
BENCHMARK(BM_C3Solve)->Arg(0)->Arg(1)->ArgName("experiment")->Unit(benchmark::kMillisecond);

void BM_AdaptUpdate(benchmark::State& state) {
  const Trace& t = GetTrace(static_cast<int>(state.range(0)));
  const auto model = acmpc::harness::MakeModelSide(t.cfg);
  const auto& log = t.run.log;
  // Buffers ending at successive steps of the trace.
  std::vector<acmpc::adapt::Buffer> buffers;
  acmpc::adapt::Buffer buf(t.cfg.learn.n_b);
  for (std::size_t k = 0; k + 1 < log.size(); ++k) {
    buf.Push(acmpc::adapt::DataPoint{log[k + 1].x_obs, log[k].x_obs, log[k].u,
                                     static_cast<std::int64_t>(k)});
    if (buf.size() == t.cfg.learn.n_b) buffers.push_back(buf);
  }
  acmpc::adapt::Augmenter augmenter(model->LearnerLinearizer());
  auto opt = acmpc::adapt::OptimizerState::Zero(t.cfg.num_lambda());
  acmpc::lcs::Residual r = acmpc::lcs::Residual::Zero(t.cfg.num_lambda());
  std::size_t i = 0;
  for (auto _ : state) {
    const auto res = acmpc::adapt::AdaptUpdate(buffers[i], r, opt, augmenter, t.cfg.learn);
    r = res.residual;
    opt = res.state;
    benchmark::DoNotOptimize(r);
    i = (i + 1) % buffers.size();
  }
}
BENCHMARK(BM_AdaptUpdate)->Arg(0)->Arg(1)->ArgName("experiment")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
