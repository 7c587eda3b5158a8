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

#include "rsac/tabular.hpp"

#include <algorithm>
#include <cmath>

#include "rsac/error.hpp"

namespace rsac {
namespace {
Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
}  // namespace

void critic_step(TabularCriticState& state, const Transition& tr,
                 const MdpModel& model, const PowerSchedule& a) {
  const double step = a(state.visits[tr.state]);
  const double target = std::exp(model.alpha() * tr.cost) * state.v(idx(tr.next)) /
                        state.v(idx(model.ref_state()));
  double& vi = state.v(idx(tr.state));
  vi = std::max(vi + step * (target - vi), kTabularValueFloor);
  ++state.visits[tr.state];
}

void grad_critic_step(TabularGradState& state,
                      const TabularCriticState& critic, const Transition& tr,
                      const MdpModel& model, const SoftmaxPolicy& policy,
                      const PowerSchedule& b) {
  const std::size_t ref = model.ref_state();
  const double rho = std::exp(model.alpha() * tr.cost) * critic.v(idx(tr.next)) /
                     (critic.v(idx(tr.state)) * critic.v(idx(ref)));
  const Eigen::VectorXd g = policy.log_grad(tr.state, tr.action) * (rho - 1.0);
  const Eigen::VectorXd increment =
      g + rho * state.w_tilde.col(idx(tr.next)) - state.w_tilde.col(idx(tr.state)) -
      state.w_tilde.col(idx(ref));
  state.w_tilde.col(idx(tr.state)) += b(state.visits[tr.state]) * increment;
  ++state.visits[tr.state];
}

Eigen::VectorXd actor_step(const Eigen::VectorXd& theta,
                           const TabularGradState& grad, std::size_t ref_state,
                           const PowerSchedule& c, std::uint64_t n) {
  return theta - c(n) * grad.w_tilde.col(idx(ref_state));
}

TabularRsac::TabularRsac(const MdpModel& model, SoftmaxPolicy policy,
                         Schedules schedules, std::uint64_t seed,
                         std::size_t start_state)
    : model_(&model),
      policy_(std::move(policy)),
      schedules_(schedules),
      rng_(seed),
      state_(start_state),
      critic_(model.num_states()),
      grad_(policy_.dim(), model.num_states()) {
  if (policy_.num_states() != model.num_states() ||
      policy_.num_actions() != model.num_actions()) {
    throw Error(ErrorCode::kInvalidArgument,
                "TabularRsac: policy does not match model dimensions");
  }
  if (start_state >= model.num_states()) {
    throw Error(ErrorCode::kInvalidArgument,
                "TabularRsac: start state out of range");
  }
}

void TabularRsac::freeze_critic(const Eigen::VectorXd& values) {
  if (values.size() != critic_.v.size() || !(values.array() > 0.0).all()) {
    throw Error(ErrorCode::kInvalidArgument,
                "TabularRsac: frozen critic must be a positive |S| vector");
  }
  critic_.v = values;
  critic_frozen_ = true;
}

Transition TabularRsac::step() {
  const Eigen::VectorXd pi = policy_.probs(state_);
  Transition tr;
  tr.state = state_;
  tr.action = sample_index({pi.data(), static_cast<std::size_t>(pi.size())}, rng_);
  const StepOutcome out = sample_step(*model_, tr.state, tr.action, rng_);
  tr.next = out.next;
  tr.cost = out.cost;

  // Every recursion reads step-n values: the actor target is formed from
  // W~_n before the gradient critic moves, which in turn reads V_n.
  const Eigen::VectorXd theta =
      actor_step(policy_.theta(), grad_, model_->ref_state(), schedules_.c, n_);
  grad_critic_step(grad_, critic_, tr, *model_, policy_, schedules_.b);
  if (critic_frozen_) {
    ++critic_.visits[tr.state];
  } else {
    critic_step(critic_, tr, *model_, schedules_.a);
  }
  if (actor_enabled_) {
    if (!theta.allFinite()) {
      throw Error(ErrorCode::kNumeric,
                  "tabular actor produced a non-finite parameter at step " +
                      std::to_string(n_));
    }
    policy_.set_theta(theta);
  }
  state_ = tr.next;
  ++n_;
  return tr;
}

}  // namespace rsac
