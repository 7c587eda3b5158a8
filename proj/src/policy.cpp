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

#include "rsac/policy.hpp"

#include <cmath>

#include "rsac/error.hpp"

namespace rsac {

SoftmaxPolicy::SoftmaxPolicy(std::size_t n_states, std::size_t n_actions,
                             Eigen::MatrixXd action_features,
                             double temperature)
    : n_states_(n_states),
      n_actions_(n_actions),
      temperature_(temperature) {
  if (static_cast<std::size_t>(action_features.rows()) !=
      n_states * n_actions) {
    throw Error(ErrorCode::kInvalidArgument,
                "SoftmaxPolicy: feature matrix needs |S|*|A| rows");
  }
  if (action_features.cols() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "SoftmaxPolicy: feature dimension must be positive");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument,
                "SoftmaxPolicy: temperature must be positive");
  }
  theta_ = Eigen::VectorXd::Zero(action_features.cols());
  features_ = std::make_shared<const Eigen::MatrixXd>(std::move(action_features));
}

void SoftmaxPolicy::set_theta(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "SoftmaxPolicy: theta has dimension " +
                    std::to_string(theta.size()) + ", expected " +
                    std::to_string(theta_.size()));
  }
  theta_ = theta;
}

SoftmaxPolicy SoftmaxPolicy::with_theta(const Eigen::VectorXd& theta) const {
  SoftmaxPolicy copy = *this;
  copy.set_theta(theta);
  return copy;
}

Eigen::VectorXd SoftmaxPolicy::probs(std::size_t state) const {
  const auto rows = features_->middleRows(
      static_cast<Eigen::Index>(state * n_actions_),
      static_cast<Eigen::Index>(n_actions_));
  Eigen::VectorXd logits = (rows * theta_) / temperature_;
  logits.array() -= logits.maxCoeff();
  Eigen::VectorXd p = logits.array().exp();
  p /= p.sum();
  return p;
}

Eigen::VectorXd SoftmaxPolicy::log_grad(std::size_t state,
                                        std::size_t action) const {
  return log_grad(state, action, probs(state));
}

Eigen::VectorXd SoftmaxPolicy::log_grad(
    std::size_t state, std::size_t action,
    const Eigen::VectorXd& state_probs) const {
  const auto rows = features_->middleRows(
      static_cast<Eigen::Index>(state * n_actions_),
      static_cast<Eigen::Index>(n_actions_));
  Eigen::VectorXd g = rows.row(static_cast<Eigen::Index>(action)).transpose();
  g.noalias() -= rows.transpose() * state_probs;
  return g / temperature_;
}

Eigen::MatrixXd one_hot_action_features(std::size_t n_actions,
                                        const std::vector<std::size_t>& group,
                                        std::size_t n_groups) {
  const auto n_states = group.size();
  Eigen::MatrixXd xi =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_states * n_actions),
                            static_cast<Eigen::Index>(n_groups * n_actions));
  for (std::size_t i = 0; i < n_states; ++i) {
    if (group[i] >= n_groups) {
      throw Error(ErrorCode::kInvalidArgument,
                  "one_hot_action_features: group index out of range");
    }
    for (std::size_t a = 0; a < n_actions; ++a) {
      xi(static_cast<Eigen::Index>(i * n_actions + a),
         static_cast<Eigen::Index>(group[i] * n_actions + a)) = 1.0;
    }
  }
  return xi;
}

SoftmaxPolicy tabular_softmax(std::size_t n_states, std::size_t n_actions,
                              double temperature) {
  std::vector<std::size_t> group(n_states);
  for (std::size_t i = 0; i < n_states; ++i) group[i] = i;
  return SoftmaxPolicy(n_states, n_actions,
                       one_hot_action_features(n_actions, group, n_states),
                       temperature);
}

}  // namespace rsac
