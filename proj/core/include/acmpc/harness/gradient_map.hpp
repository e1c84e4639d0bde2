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

#ifndef ACMPC_HARNESS_GRADIENT_MAP_HPP_
#define ACMPC_HARNESS_GRADIENT_MAP_HPP_

#include <string>
#include <vector>

#include "acmpc/harness/config.hpp"

namespace acmpc::harness {

// Tip positions are cell centers of [tip_min, tip_max]; scenario j corrupts
// the walls by delta_phi = [-d_j, d_j] with d_j cell centers of
// [-delta_max, delta_max], so d = 0 is never sampled for even counts.
struct GridSpec {
  int tip_cells = 40;
  double tip_min = -0.7;
  double tip_max = 0.7;
  int scenario_cells = 20;
  double delta_max = 0.2;

  void Validate() const;
};

enum class Region {
  kEventAndPrediction = 0,
  kEventOnly = 1,
  kPredictionOnly = 2,
  kNeither = 3,
};
const char* ToString(Region r);

struct GradientCell {
  double tip = 0.0;
  double delta = 0.0;
  bool event = false;
  bool prediction = false;
  Region region = Region::kNeither;
  double loss = 0.0;
  double grad_norm = 0.0;
};

// Cart-pole only. For each cell, steps the corrupted plant one period from
// rest with the pole tip at `tip`, then evaluates the loss gradient of the
// transition under the uncorrupted prior at r = 0. An event is a positive
// plant contact force; a prediction is a positive force of the prior model
// on the same state and input.
std::vector<GradientCell> GradientRegionMap(const ExperimentConfig& cfg,
                                            const GridSpec& grid);

void WriteGradientMapCsv(const std::string& path,
                         const std::vector<GradientCell>& cells);

}  // namespace acmpc::harness

#endif  // ACMPC_HARNESS_GRADIENT_MAP_HPP_
