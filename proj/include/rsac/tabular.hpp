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
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "rsac/mdp.hpp"
#include "rsac/policy.hpp"
#include "rsac/schedule.hpp"

namespace rsac {

/// Lower bound applied to every critic entry after an update.
inline constexpr double kTabularValueFloor = 1e-8;

struct TabularCriticState {
  Eigen::VectorXd v;                  // V_n, starts at all ones
  std::vector<std::uint64_t> visits;  // nu(i, n)

  explicit TabularCriticState(std::size_t n_states)
      : v(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_states))),
        visits(n_states, 0) {}
};

struct TabularGradState {
  Eigen::MatrixXd w_tilde;  // x1 x |S|, column i is W~(i)
  std::vector<std::uint64_t> visits;

  TabularGradState(std::size_t dim, std::size_t n_states)
      : w_tilde(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                      static_cast<Eigen::Index>(n_states))),
        visits(n_states, 0) {}
};

/// Asynchronous multiplicative critic:
///   V(i) += a(nu(i)) (exp(alpha c) V(j) / V(i0) - V(i)),
/// only the visited entry moves, then the positivity floor is applied.
void critic_step(TabularCriticState& state, const Transition& tr,
                 const MdpModel& model, const PowerSchedule& a);

/// Importance-sampled off-policy average-cost TD for the gradient:
///   rho = exp(alpha c) V(j) / (V(i) V(i0)),  g = grad log pi(i,z) (rho - 1),
///   W~(i) += b(nu(i)) (g + rho W~(j) - W~(i) - W~(i0)).
/// All right-hand side reads use the values from before the update.
void grad_critic_step(TabularGradState& state,
                      const TabularCriticState& critic, const Transition& tr,
                      const MdpModel& model, const SoftmaxPolicy& policy,
                      const PowerSchedule& b);

/// theta - c(n) W~(i0).
Eigen::VectorXd actor_step(const Eigen::VectorXd& theta,
                           const TabularGradState& grad, std::size_t ref_state,
                           const PowerSchedule& c, std::uint64_t n);

/// Full tabular actor-critic loop. With a frozen critic the value table is
/// never updated (used to isolate the gradient recursion in tests).
class TabularRsac {
 public:
  TabularRsac(const MdpModel& model, SoftmaxPolicy policy, Schedules schedules,
              std::uint64_t seed, std::size_t start_state = 0);

  void freeze_critic(const Eigen::VectorXd& values);
  void set_actor_enabled(bool enabled) { actor_enabled_ = enabled; }

  /// Samples and applies one transition; returns it.
  Transition step();

  const TabularCriticState& critic() const { return critic_; }
  const TabularGradState& grad() const { return grad_; }
  const SoftmaxPolicy& policy() const { return policy_; }
  std::uint64_t steps() const { return n_; }
  std::size_t current_state() const { return state_; }
  const Rng& rng() const { return rng_; }

 private:
  const MdpModel* model_;
  SoftmaxPolicy policy_;
  Schedules schedules_;
  Rng rng_;
  std::size_t state_;
  std::uint64_t n_ = 0;
  TabularCriticState critic_;
  TabularGradState grad_;
  bool critic_frozen_ = false;
  bool actor_enabled_ = true;
};

}  // namespace rsac
