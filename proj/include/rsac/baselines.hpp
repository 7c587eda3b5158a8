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

#include <cstdint>

#include <Eigen/Dense>

#include "rsac/features.hpp"
#include "rsac/mdp.hpp"
#include "rsac/policy.hpp"
#include "rsac/schedule.hpp"

namespace rsac {

// Risk-neutral comparison learners: a standard TD(0) linear critic with a
// likelihood-ratio actor, for the average-cost and the discounted-cost
// criteria. They share the policy family, features, schedules and actor box
// of the risk-sensitive learner.

enum class BaselineKind { kAverage, kDiscounted };

struct BaselineState {
  BaselineKind kind = BaselineKind::kAverage;
  Eigen::VectorXd v_weights;
  double avg_cost_estimate = 0.0;  // average variant only
  double gamma = 0.99;             // discounted variant only
  Eigen::VectorXd theta;
  std::uint64_t n = 0;
};

/// Average: d = c - avg + v.phi(j) - v.phi(i), avg += a(n)(c - avg).
/// Discounted: d = c + gamma v.phi(j) - v.phi(i).
/// Both: v += a(n) d phi(i), theta = Gamma(theta - c(n) d grad log pi(i,z)).
void baseline_step(BaselineState& state, const Transition& tr,
                   const Eigen::MatrixXd& phi, const Eigen::VectorXd& grad_log_pi,
                   const Schedules& schedules, double proj_bound);

class BaselineLearner {
 public:
  BaselineLearner(const MdpModel& model, const SoftmaxPolicy& policy,
                  Eigen::MatrixXd phi, BaselineKind kind, Schedules schedules,
                  double proj_bound, double gamma, std::uint64_t seed,
                  std::size_t start_state = 0);

  Transition step();

  const BaselineState& state() const { return state_; }
  const SoftmaxPolicy& policy() const { return policy_; }
  const Rng& rng() const { return rng_; }
  std::size_t current_state() const { return current_; }

 private:
  const MdpModel* model_;
  SoftmaxPolicy policy_;
  Eigen::MatrixXd phi_;
  Schedules schedules_;
  double proj_bound_;
  BaselineState state_;
  Rng rng_;
  std::size_t current_;
};

}  // namespace rsac
