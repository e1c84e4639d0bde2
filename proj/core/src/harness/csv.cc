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

#include "acmpc/harness/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace acmpc::harness {
namespace {

using nlohmann::json;

json Vec(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    out_ << (i ? "," : "") << header[i];
  }
  out_ << '\n';
}

CsvWriter& CsvWriter::Add(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out_ << (in_row_++ ? "," : "") << buf;
  return *this;
}

CsvWriter& CsvWriter::Add(std::int64_t v) {
  out_ << (in_row_++ ? "," : "") << v;
  return *this;
}

CsvWriter& CsvWriter::Add(std::uint64_t v) {
  out_ << (in_row_++ ? "," : "") << v;
  return *this;
}

CsvWriter& CsvWriter::Add(const std::string& v) {
  out_ << (in_row_++ ? "," : "") << v;
  return *this;
}

CsvWriter& CsvWriter::Add(const Eigen::VectorXd& v, int n) {
  const bool ok = v.size() == n;
  for (int i = 0; i < n; ++i) {
    Add(ok ? v(i) : std::numeric_limits<double>::quiet_NaN());
  }
  return *this;
}

void CsvWriter::EndRow() {
  if (in_row_ != columns_) {
    throw std::logic_error("csv row has " + std::to_string(in_row_) +
                           " cells, header has " + std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

std::vector<std::string> Columns(const std::string& prefix, int n) {
  std::vector<std::string> c;
  for (int i = 0; i < n; ++i) c.push_back(prefix + std::to_string(i));
  return c;
}

namespace {

std::vector<std::string> Concat(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

void WriteRunOutputs(const std::string& dir, const ExperimentConfig& cfg,
                     const RunResult& run) {
  std::filesystem::create_directories(dir);
  const int nx = cfg.num_states();
  const int nu = cfg.num_inputs();
  const int nl = cfg.num_lambda();
  const int N = cfg.mpc.horizon;
  const auto i64 = [](auto v) { return static_cast<std::int64_t>(v); };

  {
    CsvWriter w(dir + "/closed_loop.csv",
                Concat({{"step", "t", "wall_ms"}, Columns("x", nx), Columns("x_obs", nx),
                        Columns("u", nu), Columns("lambda", nl), Columns("x_d", nx),
                        Columns("lambda_d", nl), Columns("r", nl),
                        {"loss", "residual_version", "residual_checksum", "solve_ms",
                         "loop_ms", "controller_failed"}}));
    for (const auto& r : run.log) {
      w.Add(i64(r.step)).Add(r.t).Add(r.wall_ms);
      w.Add(r.x, nx).Add(r.x_obs, nx).Add(r.u, nu).Add(r.lambda, nl);
      w.Add(r.x_d, nx).Add(r.lambda_d, nl).Add(r.r, nl);
      w.Add(r.loss).Add(r.residual_version).Add(r.residual_checksum);
      w.Add(r.solve_ms).Add(r.loop_ms).Add(i64(r.controller_failed));
      w.EndRow();
    }
  }
  {
    CsvWriter w(dir + "/c3.csv",
                Concat({{"step", "solve_ms", "admm_iterations", "admm_primal_res",
                         "admm_dual_res"},
                        Columns("engaged_modes_k", N), Columns("u0_", nu), {"failed"}}));
    for (const auto& s : run.solves) {
      w.Add(i64(s.step)).Add(s.solve_ms).Add(i64(s.admm_iterations)).Add(s.primal_residual).Add(s.dual_residual);
      for (int k = 0; k < N; ++k) {
        w.Add(i64(k < static_cast<int>(s.engaged_modes.size()) ? s.engaged_modes[k] : 0));
      }
      w.Add(s.u0, nu).Add(i64(s.failed));
      w.EndRow();
    }
  }
  {
    CsvWriter w(dir + "/adapt.csv",
                Concat({{"index", "step", "loss", "grad_norm"}, Columns("r", nl),
                        {"version", "update_ms", "skipped", "failed"}}));
    for (const auto& u : run.updates) {
      w.Add(i64(u.index)).Add(i64(u.step)).Add(u.loss).Add(u.grad_norm);
      w.Add(u.r, nl).Add(u.version).Add(u.update_ms).Add(i64(u.skipped));
      w.Add(i64(u.failed));
      w.EndRow();
    }
  }
  std::ofstream summary(dir + "/summary.json");
  if (!summary) throw std::runtime_error("cannot write " + dir + "/summary.json");
  summary << SummaryJson(run.summary) << '\n';
}

std::string SummaryJson(const RunSummary& s, int indent) {
  json j = {{"experiment", ToString(s.experiment)},
            {"mode", ToString(s.mode)},
            {"adapt", s.adapt},
            {"seed", s.seed},
            {"steps", s.steps},
            {"updates", s.updates},
            {"controller_failures", s.controller_failures},
            {"learner_failures", s.learner_failures},
            {"residual_final", Vec(s.residual_final)},
            {"residual_target", Vec(s.residual_target)},
            {"residual_window_mean", Vec(s.residual_window_mean)},
            {"residual_error", s.residual_error},
            {"residual_converged", s.residual_converged},
            {"success", s.success},
            {"timing_ms",
             {{"solve_p50", s.solve_ms_p50},
              {"solve_p95", s.solve_ms_p95},
              {"update_p50", s.update_ms_p50},
              {"update_p95", s.update_ms_p95}}}};
  if (s.experiment == ExperimentId::kCartpoleWalls) {
    j["stabilized"] = s.stabilized;
    j["stabilized_step"] = s.stabilized_step;
    j["residual_converged_update"] = s.residual_converged_update;
  } else {
    j["path_progress"] = s.path_progress;
    j["path_required"] = s.path_required;
    j["path_success"] = s.path_success;
  }
  return j.dump(indent);
}

}  // namespace acmpc::harness
