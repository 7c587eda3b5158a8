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

#include "rsac/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rsac/error.hpp"

namespace rsac {

double running_risk_cost(std::span<const double> window, double alpha) {
  if (window.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "running_risk_cost: window is empty");
  }
  double shift = alpha * window[0];
  for (double c : window) shift = std::max(shift, alpha * c);
  double sum = 0.0;
  for (double c : window) sum += std::exp(alpha * c - shift);
  return shift + std::log(sum / static_cast<double>(window.size()));
}

SlidingWindowStats::SlidingWindowStats(std::size_t capacity)
    : buffer_(capacity, 0.0) {
  if (capacity == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "SlidingWindowStats: capacity must be positive");
  }
}

void SlidingWindowStats::push(double x) {
  if (count_ == buffer_.size() && count_ == 1) {
    count_ = 0;
    mean_ = 0.0;
    m2_ = 0.0;
  } else if (count_ == buffer_.size()) {
    // Remove the oldest value, then add x.
    const double old = buffer_[head_];
    const double n = static_cast<double>(count_);
    const double mean_without = (n * mean_ - old) / (n - 1.0);
    m2_ -= (old - mean_) * (old - mean_without);
    mean_ = mean_without;
    --count_;
  }
  buffer_[head_] = x;
  head_ = (head_ + 1) % buffer_.size();
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
  if (m2_ < 0.0) m2_ = 0.0;
  if (head_ == 0 && count_ == buffer_.size()) {
    // Once per full revolution, re-anchor with an exact two-pass sum so that
    // add/remove rounding cannot accumulate over long runs.
    double sum = 0.0;
    for (double v : buffer_) sum += v;
    mean_ = sum / static_cast<double>(count_);
    double ss = 0.0;
    for (double v : buffer_) ss += (v - mean_) * (v - mean_);
    m2_ = ss;
  }
}

double SlidingWindowStats::stddev() const noexcept {
  if (count_ < 2) return 0.0;
  return std::sqrt(m2_ / static_cast<double>(count_));
}

std::vector<double> SlidingWindowStats::values() const {
  std::vector<double> out;
  out.reserve(count_);
  const std::size_t cap = buffer_.size();
  const std::size_t start = (head_ + cap - count_) % cap;
  for (std::size_t k = 0; k < count_; ++k) out.push_back(buffer_[(start + k) % cap]);
  return out;
}

double SlidingWindowStats::risk_cost(double alpha) const {
  const std::vector<double> window = values();
  return running_risk_cost(window, alpha);
}

}  // namespace rsac
