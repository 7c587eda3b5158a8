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
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace rsac {

/// Linear-softmax (Gibbs) policy:
///   pi(i,a) = exp(theta^T xi(i,a) / T) / sum_b exp(theta^T xi(i,b) / T).
///
/// The feature tensor xi is stored as a (|S|*|A|) x dim matrix whose row
/// i*|A| + a is xi(i,a)^T, shared between copies. Every probability is
/// strictly positive for finite theta; logits are shifted by their row
/// maximum before exponentiation.
class SoftmaxPolicy {
 public:
  SoftmaxPolicy(std::size_t n_states, std::size_t n_actions,
                Eigen::MatrixXd action_features, double temperature = 1.0);

  std::size_t num_states() const noexcept { return n_states_; }
  std::size_t num_actions() const noexcept { return n_actions_; }
  std::size_t dim() const noexcept {
    return static_cast<std::size_t>(features_->cols());
  }
  double temperature() const noexcept { return temperature_; }

  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  void set_theta(const Eigen::VectorXd& theta);
  SoftmaxPolicy with_theta(const Eigen::VectorXd& theta) const;

  /// xi(i, a) as a row view.
  auto feature(std::size_t i, std::size_t a) const {
    return features_->row(static_cast<Eigen::Index>(i * n_actions_ + a));
  }
  const Eigen::MatrixXd& features() const noexcept { return *features_; }

  Eigen::VectorXd probs(std::size_t state) const;

  /// grad_theta log pi(i, a) = (xi(i,a) - sum_b pi(i,b) xi(i,b)) / T.
  Eigen::VectorXd log_grad(std::size_t state, std::size_t action) const;

  /// Same as log_grad but reuses already computed probabilities of `state`.
  Eigen::VectorXd log_grad(std::size_t state, std::size_t action,
                           const Eigen::VectorXd& state_probs) const;

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  std::shared_ptr<const Eigen::MatrixXd> features_;
  double temperature_;
  Eigen::VectorXd theta_;
};

/// One-hot (group(i), a) features: xi(i,a) = e_{group(i)*|A| + a}. With the
/// identity grouping this is the tabular softmax.
Eigen::MatrixXd one_hot_action_features(std::size_t n_actions,
                                        const std::vector<std::size_t>& group,
                                        std::size_t n_groups);

/// The convenience form used throughout: theta = 0, tabular one-hot features.
SoftmaxPolicy tabular_softmax(std::size_t n_states, std::size_t n_actions,
                              double temperature = 1.0);

}  // namespace rsac
