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
#include <random>
#include <span>
#include <string>
#include <vector>

namespace rsac {

/// A single observed step (i_n, z_n, i_{n+1}, c(i_n, z_n, i_{n+1})).
struct Transition {
  std::size_t state = 0;
  std::size_t action = 0;
  std::size_t next = 0;
  double cost = 0.0;
};

/// Finite MDP with dense p(i,a,j) and c(i,a,j) tensors, a risk factor and a
/// reference state i0. Immutable once constructed; the constructor validates
/// row stochasticity (1e-12), alpha > 0 and the reference index.
class MdpModel {
 public:
  MdpModel(std::size_t n_states, std::size_t n_actions,
           std::vector<double> trans, std::vector<double> cost, double alpha,
           std::size_t ref_state = 0);

  std::size_t num_states() const noexcept { return n_states_; }
  std::size_t num_actions() const noexcept { return n_actions_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t ref_state() const noexcept { return ref_state_; }

  double p(std::size_t i, std::size_t a, std::size_t j) const {
    return trans_[index(i, a, j)];
  }
  double c(std::size_t i, std::size_t a, std::size_t j) const {
    return cost_[index(i, a, j)];
  }

  /// Row p(i, a, .) as a view of length |S|.
  std::span<const double> trans_row(std::size_t i, std::size_t a) const {
    return {trans_.data() + index(i, a, 0), n_states_};
  }
  std::span<const double> cost_row(std::size_t i, std::size_t a) const {
    return {cost_.data() + index(i, a, 0), n_states_};
  }

  const std::vector<double>& trans() const noexcept { return trans_; }
  const std::vector<double>& cost() const noexcept { return cost_; }

  /// Same dynamics and costs with a different risk factor.
  MdpModel with_alpha(double alpha) const;
  MdpModel with_ref_state(std::size_t ref_state) const;

 private:
  std::size_t index(std::size_t i, std::size_t a, std::size_t j) const {
    return (i * n_actions_ + a) * n_states_ + j;
  }

  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<double> trans_;
  std::vector<double> cost_;
  double alpha_;
  std::size_t ref_state_;
};

/// Seedable random stream. Uniforms are built from the top 53 bits of a
/// 64-bit Mersenne twister so that a seed fully determines every draw
/// independently of the standard library's distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  double uniform();  // [0, 1)
  std::uint64_t next_u64() { return engine_(); }

  /// Independent substream derived from this stream's seed.
  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::string serialize() const;
  static Rng deserialize(const std::string& text);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Index drawn by inverse CDF over a probability row.
std::size_t sample_index(std::span<const double> probs, Rng& rng);

struct StepOutcome {
  std::size_t next = 0;
  double cost = 0.0;
};

StepOutcome sample_step(const MdpModel& model, std::size_t state,
                        std::size_t action, Rng& rng);

struct Trajectory {
  std::vector<std::size_t> states;
  std::vector<std::size_t> actions;
  std::vector<double> costs;
  std::uint64_t rng_seed = 0;
};

class SoftmaxPolicy;

/// Rolls out `steps` transitions from `start` under `policy`.
Trajectory simulate(const MdpModel& model, const SoftmaxPolicy& policy,
                    std::size_t start, std::size_t steps, std::uint64_t seed);

}  // namespace rsac
