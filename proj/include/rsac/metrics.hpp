// Copyright 2026 The rsac Authors
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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rsac {

/// log(sum_i exp(alpha c_i) / N), evaluated with a max shift.
/// Throws kInvalidArgument on an empty window.
double running_risk_cost(std::span<const double> window, double alpha);

/// Mean and standard deviation over the last `capacity` observations,
/// maintained with Welford add/remove updates.
class SlidingWindowStats {
 public:
  explicit SlidingWindowStats(std::size_t capacity);

  void push(double x);

  std::size_t size() const noexcept { return count_; }
  std::size_t capacity() const noexcept { return buffer_.size(); }
  double mean() const noexcept { return mean_; }
  /// Population standard deviation of the window; 0 for fewer than 2 values.
  double stddev() const noexcept;
  double risk_cost(double alpha) const;

  /// Window contents, oldest first.
  std::vector<double> values() const;

 private:
  std::vector<double> buffer_;
  std::size_t head_ = 0;  // next write position
  std::size_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct MetricRow {
  std::uint64_t step = 0;
  double mean = 0.0;
  double std = 0.0;
  double risk_cost = 0.0;
  std::optional<double> oracle_cost;
  double elapsed_s = 0.0;
};

}  // namespace rsac
