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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace acmpc::cli {
namespace {

namespace fs = std::filesystem;

std::string ConfigPath(const std::string& name) {
  return std::string(ACMPC_SOURCE_DIR) + "/configs/" + name;
}

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome Invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "acmpc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

fs::path TempDir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("acmpc_cli_" + name);
  fs::remove_all(p);
  return p;
}

bool SummarySuccess(const std::string& json) {
  const auto at = json.find("\"success\":");
  EXPECT_NE(at, std::string::npos) << json;
  return json.compare(at + 10, 5, " true") == 0;
}

TEST(Cli, ValidateConfigAcceptsShippedConfigs) {
  for (const char* name : {"cartpole_walls.json", "pusher_ball.json"}) {
    const Outcome o = Invoke({"validate-config", "--config", ConfigPath(name)});
    EXPECT_EQ(o.code, kExitOk) << o.err;
    EXPECT_NE(o.out.find(": ok"), std::string::npos);
  }
}

TEST(Cli, MissingRequiredFlagNamesIt) {
  const Outcome o = Invoke({"simulate"});
  EXPECT_EQ(o.code, kExitConfig);
  EXPECT_NE(o.err.find("--config"), std::string::npos) << o.err;
}

TEST(Cli, UnknownFlagAndSubcommand) {
  EXPECT_EQ(Invoke({"simulate", "--config", ConfigPath("pusher_ball.json"), "--fast"}).code,
            kExitConfig);
  EXPECT_EQ(Invoke({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(Invoke({}).code, kExitConfig);
  EXPECT_EQ(Invoke({"simulate", "--config", ConfigPath("pusher_ball.json"), "--mode", "fast"})
                .code,
            kExitConfig);
}

TEST(Cli, HelpExitsZero) {
  const Outcome o = Invoke({"--help"});
  EXPECT_EQ(o.code, kExitOk);
  EXPECT_NE(o.out.find("simulate"), std::string::npos);
}

TEST(Cli, BadConfigIsConfigError) {
  const fs::path dir = TempDir("bad");
  fs::create_directories(dir);
  const std::string path = (dir / "bad.json").string();
  std::ofstream(path) << R"({"experiment": "cartpole_walls", "rates": {"control_hz": 7}})";
  const Outcome o = Invoke({"validate-config", "--config", path});
  EXPECT_EQ(o.code, kExitConfig);
  EXPECT_NE(o.err.find("config error"), std::string::npos);
  EXPECT_EQ(Invoke({"simulate", "--config", (dir / "missing.json").string()}).code,
            kExitConfig);
}

TEST(Cli, SimulateWritesOutputs) {
  const fs::path dir = TempDir("sim");
  const Outcome o = Invoke({"simulate", "--config", ConfigPath("pusher_ball.json"),
                            "--duration", "0.5", "--out", dir.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  for (const char* f : {"closed_loop.csv", "c3.csv", "adapt.csv", "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_NE(o.out.find("\"steps\": 50"), std::string::npos) << o.out;
}

TEST(Cli, OutputDirPrecedence) {
  const fs::path env_dir = TempDir("env");
  const fs::path flag_dir = TempDir("flag");
  setenv("ACMPC_OUT_DIR", env_dir.c_str(), 1);
  const std::string cfg = ConfigPath("pusher_ball.json");
  EXPECT_EQ(Invoke({"simulate", "--config", cfg, "--duration", "0.1"}).code, kExitOk);
  EXPECT_TRUE(fs::exists(env_dir / "summary.json"));
  EXPECT_EQ(
      Invoke({"simulate", "--config", cfg, "--duration", "0.1", "--out", flag_dir.string()})
          .code,
      kExitOk);
  EXPECT_TRUE(fs::exists(flag_dir / "summary.json"));
  unsetenv("ACMPC_OUT_DIR");
}

TEST(Cli, UnwritableOutputIsRuntimeError) {
  const fs::path blocker = TempDir("blocker");
  std::ofstream(blocker.string()) << "file, not a directory";
  const Outcome o = Invoke({"simulate", "--config", ConfigPath("pusher_ball.json"),
                            "--duration", "0.1", "--out", (blocker / "sub").string()});
  EXPECT_EQ(o.code, kExitRuntime);
  EXPECT_NE(o.err.find("runtime failure"), std::string::npos);
  fs::remove(blocker);
}

TEST(Cli, CartpoleNeedsAdaptation) {
  const std::string cfg = ConfigPath("cartpole_walls.json");
  const Outcome off = Invoke({"simulate", "--config", cfg, "--no-adapt", "--out",
                              TempDir("cp_off").string()});
  ASSERT_EQ(off.code, kExitOk) << off.err;
  EXPECT_FALSE(SummarySuccess(off.out));
  const Outcome on = Invoke({"simulate", "--config", cfg, "--out", TempDir("cp_on").string()});
  ASSERT_EQ(on.code, kExitOk) << on.err;
  EXPECT_TRUE(SummarySuccess(on.out));
}

TEST(Cli, GradientMapWritesCsv) {
  const fs::path dir = TempDir("gmap");
  const Outcome o = Invoke({"gradient-map", "--config", ConfigPath("cartpole_walls.json"),
                            "--tip-cells", "8", "--scenario-cells", "4", "--out",
                            dir.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(fs::exists(dir / "gradient_map.csv"));
  EXPECT_NE(o.out.find("neither"), std::string::npos);
  // The map is defined for the cart-pole only.
  EXPECT_EQ(Invoke({"gradient-map", "--config", ConfigPath("pusher_ball.json")}).code,
            kExitConfig);
}

TEST(Cli, BenchWritesJson) {
  const fs::path dir = TempDir("bench");
  const Outcome o = Invoke({"bench", "--config", ConfigPath("cartpole_walls.json"),
                            "--calls", "10", "--out", dir.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("c3_solve"), std::string::npos);
  EXPECT_NE(o.out.find("adapt_update"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "bench.json"));
}

}  // namespace
}  // namespace acmpc::cli
