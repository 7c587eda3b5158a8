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

#include "rsac/mdp.hpp"

#include <cmath>
#include <sstream>

#include "rsac/error.hpp"
#include "rsac/policy.hpp"

namespace rsac {

MdpModel::MdpModel(std::size_t n_states, std::size_t n_actions,
                   std::vector<double> trans, std::vector<double> cost,
                   double alpha, std::size_t ref_state)
    : n_states_(n_states),
      n_actions_(n_actions),
      trans_(std::move(trans)),
      cost_(std::move(cost)),
      alpha_(alpha),
      ref_state_(ref_state) {
  if (n_states_ == 0 || n_actions_ == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "MdpModel: state and action counts must be positive");
  }
  const std::size_t expected = n_states_ * n_actions_ * n_states_;
  if (trans_.size() != expected || cost_.size() != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                "MdpModel: tensors must have |S|*|A|*|S| = " +
                    std::to_string(expected) + " entries");
  }
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw Error(ErrorCode::kInvalidArgument,
                "MdpModel: alpha must be a positive finite number");
  }
  if (ref_state_ >= n_states_) {
    throw Error(ErrorCode::kInvalidArgument,
                "MdpModel: ref_state out of range");
  }
  for (std::size_t i = 0; i < n_states_; ++i) {
    for (std::size_t a = 0; a < n_actions_; ++a) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n_states_; ++j) {
        const double pij = trans_[index(i, a, j)];
        if (!(pij >= 0.0) || !std::isfinite(pij)) {
          throw Error(ErrorCode::kInvalidArgument,
                      "MdpModel: negative or non-finite probability at (" +
                          std::to_string(i) + "," + std::to_string(a) + "," +
                          std::to_string(j) + ")");
        }
        if (!std::isfinite(cost_[index(i, a, j)])) {
          throw Error(ErrorCode::kInvalidArgument,
                      "MdpModel: non-finite cost");
        }
        sum += pij;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw Error(ErrorCode::kInvalidArgument,
                    "MdpModel: row (" + std::to_string(i) + "," +
                        std::to_string(a) + ") sums to " +
                        std::to_string(sum));
      }
    }
  }
}

MdpModel MdpModel::with_alpha(double alpha) const {
  return MdpModel(n_states_, n_actions_, trans_, cost_, alpha, ref_state_);
}

MdpModel MdpModel::with_ref_state(std::size_t ref_state) const {
  return MdpModel(n_states_, n_actions_, trans_, cost_, alpha_, ref_state);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::string Rng::serialize() const {
  std::ostringstream out;
  out << seed_ << ' ' << engine_;
  return out.str();
}

Rng Rng::deserialize(const std::string& text) {
  std::istringstream in(text);
  Rng rng;
  in >> rng.seed_ >> rng.engine_;
  if (!in) {
    throw Error(ErrorCode::kIo, "Rng: malformed serialized state");
  }
  return rng;
}

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] > 0.0) {
      cumulative += probs[k];
      last_positive = k;
      if (u < cumulative) return k;
    }
  }
  // Rounding left u above the accumulated mass.
  return last_positive;
}

StepOutcome sample_step(const MdpModel& model, std::size_t state,
                        std::size_t action, Rng& rng) {
  const std::size_t next = sample_index(model.trans_row(state, action), rng);
  return {next, model.c(state, action, next)};
}

Trajectory simulate(const MdpModel& model, const SoftmaxPolicy& policy,
                    std::size_t start, std::size_t steps, std::uint64_t seed) {
  Rng rng(seed);
  Trajectory traj;
  traj.rng_seed = seed;
  traj.states.reserve(steps + 1);
  traj.actions.reserve(steps);
  traj.costs.reserve(steps);
  std::size_t state = start;
  traj.states.push_back(state);
  for (std::size_t n = 0; n < steps; ++n) {
    const Eigen::VectorXd pi = policy.probs(state);
    const std::size_t action =
        sample_index({pi.data(), static_cast<std::size_t>(pi.size())}, rng);
    const StepOutcome out = sample_step(model, state, action, rng);
    traj.actions.push_back(action);
    traj.costs.push_back(out.cost);
    traj.states.push_back(out.next);
    state = out.next;
  }
  return traj;
}

}  // namespace rsac
