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

#include "cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acmpc/harness/bench.hpp"
#include "acmpc/harness/closed_loop.hpp"
#include "acmpc/harness/config.hpp"
#include "acmpc/harness/csv.hpp"
#include "acmpc/harness/gradient_map.hpp"

namespace acmpc::cli {
namespace {

using harness::ExperimentConfig;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool no_adapt = false;
  std::string out;
  std::string mode;
  std::optional<double> duration;
  int calls = 1000;
  harness::GridSpec grid;
};

// Output directory: --out, then ACMPC_OUT_DIR, then the config.
std::string OutputDir(const Options& o, const ExperimentConfig& cfg) {
  return o.out.empty() ? harness::ResolveOutputDir(cfg) : o.out;
}

ExperimentConfig Load(const Options& o) {
  ExperimentConfig cfg = harness::LoadConfig(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.no_adapt) cfg.adapt = false;
  if (o.mode == "deterministic") cfg.mode = harness::RunMode::kDeterministic;
  if (o.mode == "realtime") cfg.mode = harness::RunMode::kRealtime;
  if (o.duration) cfg.duration_s = *o.duration;
  cfg.Validate();
  return cfg;
}

int Simulate(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = Load(o);
  const harness::RunResult run = harness::RunClosedLoop(cfg);
  const std::string dir = OutputDir(o, cfg);
  harness::WriteRunOutputs(dir, cfg, run);
  out << harness::SummaryJson(run.summary) << '\n';
  return kExitOk;
}

int GradientMap(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = Load(o);
  const auto cells = harness::GradientRegionMap(cfg, o.grid);
  const std::string dir = OutputDir(o, cfg);
  std::filesystem::create_directories(dir);
  harness::WriteGradientMapCsv(dir + "/gradient_map.csv", cells);
  std::map<std::string, std::pair<int, int>> counts;  // cells, zero-gradient cells
  for (const auto& c : cells) {
    auto& e = counts[harness::ToString(c.region)];
    ++e.first;
    e.second += c.grad_norm == 0.0;
  }
  for (const auto& [name, e] : counts) {
    out << name << ": " << e.first << " cells, " << e.second << " with zero gradient\n";
  }
  out << "wrote " << dir << "/gradient_map.csv\n";
  return kExitOk;
}

int Bench(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = Load(o);
  const harness::BenchReport report = harness::RunBench(cfg, o.calls);
  out << harness::FormatBenchReport(report);
  if (!o.out.empty()) {
    std::filesystem::create_directories(o.out);
    std::ofstream f(o.out + "/bench.json");
    f << harness::BenchReportJson(report) << '\n';
  }
  return kExitOk;
}

int ValidateConfig(const Options& o, std::ostream& out) {
  const ExperimentConfig cfg = Load(o);
  out << o.config << ": ok (" << harness::ToString(cfg.experiment) << ", "
      << cfg.steps() << " control periods)\n";
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive contact-implicit MPC experiments"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config (JSON)")->required();
    sub->add_option("--out", o.out, "Output directory");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "Run the closed loop");
  add_common(simulate);
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_flag("--no-adapt", o.no_adapt, "Disable residual learning");
  simulate->add_option("--mode", o.mode, "deterministic or realtime")
      ->check(CLI::IsMember({"deterministic", "realtime"}));
  simulate->add_option("--duration", o.duration, "Simulated seconds")
      ->check(CLI::PositiveNumber);

  CLI::App* gmap = app.add_subcommand("gradient-map", "Loss-gradient region map");
  add_common(gmap);
  gmap->add_option("--tip-cells", o.grid.tip_cells, "Tip position cells")
      ->check(CLI::Range(1, 100000));
  gmap->add_option("--scenario-cells", o.grid.scenario_cells, "Wall error cells")
      ->check(CLI::Range(1, 100000));
  gmap->add_option("--delta-max", o.grid.delta_max, "Largest wall error")
      ->check(CLI::PositiveNumber);

  CLI::App* bench = app.add_subcommand("bench", "Time c3_solve and adapt_update");
  add_common(bench);
  bench->add_option("--calls", o.calls, "Timed calls per operation")
      ->check(CLI::Range(1, 10000000));

  CLI::App* validate = app.add_subcommand("validate-config", "Check a config file");
  validate->add_option("--config", o.config, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (*simulate) return Simulate(o, out);
    if (*gmap) return GradientMap(o, out);
    if (*bench) return Bench(o, out);
    if (*validate) return ValidateConfig(o, out);
  } catch (const harness::ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}

}  // namespace acmpc::cli
