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

#include "rsac/baselines.hpp"

#include <cmath>

#include "rsac/error.hpp"
#include "rsac/rsacfa.hpp"

namespace rsac {

void baseline_step(BaselineState& state, const Transition& tr,
                   const Eigen::MatrixXd& phi, const Eigen::VectorXd& grad_log_pi,
                   const Schedules& schedules, double proj_bound) {
  const auto phi_i = phi.row(static_cast<Eigen::Index>(tr.state));
  const auto phi_j = phi.row(static_cast<Eigen::Index>(tr.next));
  const double v_i = phi_i.dot(state.v_weights);
  const double v_j = phi_j.dot(state.v_weights);
  const double a_n = schedules.a(state.n);

  double d = 0.0;
  if (state.kind == BaselineKind::kAverage) {
    d = tr.cost - state.avg_cost_estimate + v_j - v_i;
    state.avg_cost_estimate += a_n * (tr.cost - state.avg_cost_estimate);
  } else {
    d = tr.cost + state.gamma * v_j - v_i;
  }
  state.v_weights += (a_n * d) * phi_i.transpose();
  state.theta =
      project_box(state.theta - schedules.c(state.n) * d * grad_log_pi, proj_bound);
  ++state.n;
}

BaselineLearner::BaselineLearner(const MdpModel& model,
                                 const SoftmaxPolicy& policy,
                                 Eigen::MatrixXd phi, BaselineKind kind,
                                 Schedules schedules, double proj_bound,
                                 double gamma, std::uint64_t seed,
                                 std::size_t start_state)
    : model_(&model),
      policy_(policy),
      phi_(std::move(phi)),
      schedules_(schedules),
      proj_bound_(proj_bound),
      rng_(seed),
      current_(start_state) {
  if (static_cast<std::size_t>(phi_.rows()) != model.num_states() ||
      policy_.num_states() != model.num_states() ||
      policy_.num_actions() != model.num_actions() ||
      start_state >= model.num_states()) {
    throw Error(ErrorCode::kInvalidArgument,
                "baseline: model, policy and features disagree on dimensions");
  }
  if (kind == BaselineKind::kDiscounted && !(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "baseline: discount gamma must lie in (0,1)");
  }
  if (!(proj_bound > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "baseline: proj_bound must be positive");
  }
  state_.kind = kind;
  state_.gamma = gamma;
  state_.v_weights = Eigen::VectorXd::Zero(phi_.cols());
  state_.theta = project_box(policy_.theta(), proj_bound_);
  policy_.set_theta(state_.theta);
}

Transition BaselineLearner::step() {
  const Eigen::VectorXd pi = policy_.probs(current_);
  Transition tr;
  tr.state = current_;
  tr.action = sample_index({pi.data(), static_cast<std::size_t>(pi.size())}, rng_);
  const StepOutcome out = sample_step(*model_, tr.state, tr.action, rng_);
  tr.next = out.next;
  tr.cost = out.cost;

  const std::uint64_t n = state_.n;
  baseline_step(state_, tr, phi_, policy_.log_grad(tr.state, tr.action, pi),
                schedules_, proj_bound_);
  if (!state_.theta.allFinite() || !state_.v_weights.allFinite()) {
    throw Error(ErrorCode::kNumeric,
                "baseline: non-finite iterate at step " + std::to_string(n));
  }
  policy_.set_theta(state_.theta);
  current_ = tr.next;
  return tr;
}

}  // namespace rsac
