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

#include "acmpc/harness/gradient_map.hpp"

#include "acmpc/adapt/implicit_loss.hpp"
#include "acmpc/harness/csv.hpp"
#include "acmpc/lcs/lcs.hpp"
#include "acmpc/models/cartpole_walls.hpp"

namespace acmpc::harness {
namespace {

double CellCenter(double lo, double hi, int i, int n) {
  return lo + (hi - lo) * (i + 0.5) / n;
}

}  // namespace

void GridSpec::Validate() const {
  if (tip_cells < 1 || scenario_cells < 1) {
    throw ConfigError("grid: cell counts must be >= 1");
  }
  if (!(tip_max > tip_min) || !(delta_max > 0.0)) {
    throw ConfigError("grid: need tip_max > tip_min and delta_max > 0");
  }
}

const char* ToString(Region r) {
  switch (r) {
    case Region::kEventAndPrediction: return "event_prediction";
    case Region::kEventOnly: return "event_only";
    case Region::kPredictionOnly: return "prediction_only";
    case Region::kNeither: return "neither";
  }
  return "unknown";
}

std::vector<GradientCell> GradientRegionMap(const ExperimentConfig& cfg,
                                            const GridSpec& grid) {
  if (cfg.experiment != ExperimentId::kCartpoleWalls) {
    throw ConfigError("gradient-map requires the cartpole_walls experiment");
  }
  cfg.Validate();
  grid.Validate();
  const lcs::Residual zero = lcs::Residual::Zero(2);
  const Eigen::VectorXd u = Eigen::VectorXd::Zero(1);
  std::vector<GradientCell> cells;
  cells.reserve(static_cast<std::size_t>(grid.tip_cells) * grid.scenario_cells);
  for (int j = 0; j < grid.scenario_cells; ++j) {
    const double delta = CellCenter(-grid.delta_max, grid.delta_max, j, grid.scenario_cells);
    models::CartpoleWallsParams p = cfg.cartpole;
    p.delta_phi = Eigen::Vector2d(-delta, delta);
    const models::CartpoleLcsPair pair = models::CartpoleWallsLcs(p);
    for (int i = 0; i < grid.tip_cells; ++i) {
      GradientCell cell;
      cell.tip = CellCenter(grid.tip_min, grid.tip_max, i, grid.tip_cells);
      cell.delta = delta;
      // At rest with theta = 0 the tip sits at the cart position.
      Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
      x(0) = cell.tip;
      const lcs::StepResult data = lcs::LcsStep(lcs::LcsState{x, 0}, u, pair.truth, zero);
      const lcs::StepResult model = lcs::LcsStep(lcs::LcsState{x, 0}, u, pair.prior, zero);
      cell.event = data.lambda.maxCoeff() > 0.0;
      cell.prediction = model.lambda.maxCoeff() > 0.0;
      cell.region = cell.event ? (cell.prediction ? Region::kEventAndPrediction
                                                  : Region::kEventOnly)
                               : (cell.prediction ? Region::kPredictionOnly
                                                  : Region::kNeither);
      const adapt::PointLoss l = adapt::ImplicitLossPoint(
          adapt::DataPoint{data.next.x, x, u, 0}, pair.prior, zero, cfg.learn);
      cell.loss = l.value;
      cell.grad_norm = l.gradient.norm();
      cells.push_back(cell);
    }
  }
  return cells;
}

void WriteGradientMapCsv(const std::string& path, const std::vector<GradientCell>& cells) {
  CsvWriter w(path, {"tip", "delta", "event", "prediction", "region", "loss", "grad_norm"});
  for (const auto& c : cells) {
    w.Add(c.tip).Add(c.delta);
    w.Add(static_cast<std::int64_t>(c.event)).Add(static_cast<std::int64_t>(c.prediction));
    w.Add(std::string(ToString(c.region))).Add(c.loss).Add(c.grad_norm);
    w.EndRow();
  }
}

}  // namespace acmpc::harness
