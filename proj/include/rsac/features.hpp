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
#include <vector>

#include <Eigen/Dense>

namespace rsac {

/// Linear state features for the value critic (phi, |S| x x2) and for the
/// gradient critic (psi, |S| x x3). Row i is the feature vector of state i.
struct FeatureMaps {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd psi;

  std::size_t num_states() const { return static_cast<std::size_t>(phi.rows()); }
  std::size_t critic_dim() const { return static_cast<std::size_t>(phi.cols()); }
  std::size_t grad_dim() const { return static_cast<std::size_t>(psi.cols()); }
};

/// Indicator matrix of a partition: column k is 1 on the states of group k.
Eigen::MatrixXd aggregation_features(const std::vector<std::size_t>& group,
                                     std::size_t n_groups);

/// Throws kFeatureDegenerate unless the columns of phi are pairwise
/// orthogonal, componentwise nonnegative and each has a positive entry.
void check_positive_cone_orthogonal(const Eigen::MatrixXd& phi,
                                    double tol = 1e-12);

/// Contiguous blocks of `block` states: group(i) = i / block.
std::vector<std::size_t> contiguous_groups(std::size_t n_states,
                                           std::size_t block,
                                           std::size_t* n_groups = nullptr);

}  // namespace rsac
