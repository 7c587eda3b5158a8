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

#include <cmath>
#include <cstdint>

namespace rsac {

/// step(n) = scale / (1 + n / tau)^exponent.
struct PowerSchedule {
  double scale = 0.1;
  double exponent = 0.55;
  double tau = 1e4;

  double operator()(std::uint64_t n) const {
    return scale / std::pow(1.0 + static_cast<double>(n) / tau, exponent);
  }
};

/// Three coupled rates: a(n) for the value critic, b(n) for the gradient
/// critic, c(n) for the actor. The defaults satisfy b/a -> 0 and c/b -> 0
/// with square-summable, non-summable sequences.
struct Schedules {
  PowerSchedule a{0.1, 0.55, 1e4};
  PowerSchedule b{0.05, 0.7, 1e4};
  PowerSchedule c{0.01, 0.9, 1e4};
};

}  // namespace rsac
