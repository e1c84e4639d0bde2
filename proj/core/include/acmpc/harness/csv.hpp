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

#ifndef ACMPC_HARNESS_CSV_HPP_
#define ACMPC_HARNESS_CSV_HPP_

#include <fstream>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "acmpc/harness/closed_loop.hpp"

namespace acmpc::harness {

// Comma-separated rows; doubles are written with 17 significant digits so a
// file round-trips bit-exactly.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  CsvWriter& Add(double v);
  CsvWriter& Add(std::int64_t v);
  CsvWriter& Add(std::uint64_t v);
  CsvWriter& Add(const std::string& v);
  // Writes exactly n cells; a vector of another length becomes n NaNs.
  CsvWriter& Add(const Eigen::VectorXd& v, int n);
  void EndRow();

 private:
  std::ofstream out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

// Column names "<prefix>0", "<prefix>1", ...
std::vector<std::string> Columns(const std::string& prefix, int n);

// Writes closed_loop.csv, c3.csv, adapt.csv and summary.json into dir.
void WriteRunOutputs(const std::string& dir, const ExperimentConfig& cfg,
                     const RunResult& run);
std::string SummaryJson(const RunSummary& s, int indent = 2);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_CSV_HPP_
