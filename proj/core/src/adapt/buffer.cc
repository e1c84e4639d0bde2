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

#include "acmpc/adapt/buffer.hpp"

#include <stdexcept>
#include <string>

namespace acmpc::adapt {

Buffer::Buffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("buffer capacity must be >= 1");
}

void Buffer::Push(DataPoint pt) {
  if (pt.x.size() != pt.x_next.size() || !pt.x.allFinite() ||
      !pt.x_next.allFinite() || !pt.u.allFinite()) {
    throw std::invalid_argument("data point has inconsistent or non-finite entries");
  }
  if (!points_.empty()) {
    const DataPoint& last = points_.back();
    if (pt.k <= last.k) {
      throw std::invalid_argument("data point index " + std::to_string(pt.k) +
                                  " does not follow " + std::to_string(last.k));
    }
    if (pt.x.size() != last.x.size() || pt.u.size() != last.u.size()) {
      throw std::invalid_argument("data point dimensions changed");
    }
  }
  points_.push_back(std::move(pt));
  while (static_cast<int>(points_.size()) > capacity_) points_.pop_front();
}

std::int64_t Buffer::oldest_index() const {
  if (points_.empty()) throw std::logic_error("empty buffer has no oldest index");
  return points_.front().k;
}

Augmenter::Augmenter(Linearizer linearizer) : linearizer_(std::move(linearizer)) {
  if (!linearizer_) throw std::invalid_argument("Augmenter needs a linearizer");
}

AugmentedBuffer Augmenter::Augment(const Buffer& buffer) {
  AugmentedBuffer out;
  std::map<std::int64_t, std::shared_ptr<const lcs::LcsParams>> next_cache;
  for (const DataPoint& pt : buffer.points()) {
    std::shared_ptr<const lcs::LcsParams> theta;
    if (auto it = cache_.find(pt.k); it != cache_.end()) {
      theta = it->second;
    } else {
      ++linearizations_;
      try {
        auto lin = std::make_shared<const lcs::LcsParams>(linearizer_(pt));
        lin->Validate();
        theta = std::move(lin);
      } catch (const std::exception&) {
        ++failures_;
      }
    }
    // Failed entries are cached as null so they are not retried.
    next_cache.emplace(pt.k, theta);
    if (theta) {
      out.entries.push_back(AugmentedEntry{pt, theta});
    } else {
      ++out.skipped;
    }
  }
  cache_ = std::move(next_cache);
  return out;
}

Linearizer ConstantLinearizer(lcs::LcsParams theta) {
  auto shared = std::make_shared<const lcs::LcsParams>(std::move(theta));
  return [shared](const DataPoint&) { return *shared; };
}

}  // namespace acmpc::adapt
