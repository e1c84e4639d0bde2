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

#ifndef ACMPC_ADAPT_BUFFER_HPP_
#define ACMPC_ADAPT_BUFFER_HPP_

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "acmpc/lcs/lcs.hpp"

namespace acmpc::adapt {

struct DataPoint {
  Eigen::VectorXd x_next;
  Eigen::VectorXd x;
  Eigen::VectorXd u;
  std::int64_t k = 0;
};

// Most-recent window of transitions, oldest evicted first.
class Buffer {
 public:
  explicit Buffer(int capacity = 10);

  // Throws std::invalid_argument on a non-increasing step index or a
  // dimension change.
  void Push(DataPoint pt);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(points_.size()); }
  bool empty() const { return points_.empty(); }
  // Step index of the oldest retained point.
  std::int64_t oldest_index() const;
  const std::deque<DataPoint>& points() const { return points_; }

 private:
  int capacity_;
  std::deque<DataPoint> points_;
};

struct AugmentedEntry {
  DataPoint point;
  std::shared_ptr<const lcs::LcsParams> theta;
};

struct AugmentedBuffer {
  std::vector<AugmentedEntry> entries;
  // Points whose linearization failed; excluded from the loss.
  int skipped = 0;
};

// Local model for one data point.
using Linearizer = std::function<lcs::LcsParams(const DataPoint&)>;

// Pairs buffer points with their local LCS, caching by step index.
class Augmenter {
 public:
  explicit Augmenter(Linearizer linearizer);

  AugmentedBuffer Augment(const Buffer& buffer);

  // Total linearizer calls so far.
  std::int64_t linearizations() const { return linearizations_; }
  std::int64_t failures() const { return failures_; }

 private:
  Linearizer linearizer_;
  std::map<std::int64_t, std::shared_ptr<const lcs::LcsParams>> cache_;
  std::int64_t linearizations_ = 0;
  std::int64_t failures_ = 0;
};

// Linearizer returning one fixed model for every point.
Linearizer ConstantLinearizer(lcs::LcsParams theta);

}  // namespace acmpc::adapt

#endif  // ACMPC_ADAPT_BUFFER_HPP_
