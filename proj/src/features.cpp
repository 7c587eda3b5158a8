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

#include "rsac/features.hpp"

#include <cmath>

#include "rsac/error.hpp"

namespace rsac {

Eigen::MatrixXd aggregation_features(const std::vector<std::size_t>& group,
                                     std::size_t n_groups) {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(group.size()),
      static_cast<Eigen::Index>(n_groups));
  for (std::size_t i = 0; i < group.size(); ++i) {
    if (group[i] >= n_groups) {
      throw Error(ErrorCode::kInvalidArgument,
                  "aggregation_features: group index out of range");
    }
    phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(group[i])) =
        1.0;
  }
  return phi;
}

void check_positive_cone_orthogonal(const Eigen::MatrixXd& phi, double tol) {
  if ((phi.array() < 0.0).any()) {
    throw Error(ErrorCode::kFeatureDegenerate,
                "critic features must be componentwise nonnegative");
  }
  const Eigen::MatrixXd gram = phi.transpose() * phi;
  for (Eigen::Index k = 0; k < gram.rows(); ++k) {
    if (!(gram(k, k) > 0.0)) {
      throw Error(ErrorCode::kFeatureDegenerate,
                  "critic feature column " + std::to_string(k) +
                      " has no positive entry");
    }
    for (Eigen::Index l = 0; l < k; ++l) {
      if (std::abs(gram(k, l)) > tol * std::sqrt(gram(k, k) * gram(l, l))) {
        throw Error(ErrorCode::kFeatureDegenerate,
                    "critic feature columns " + std::to_string(l) + " and " +
                        std::to_string(k) + " are not orthogonal");
      }
    }
  }
}

std::vector<std::size_t> contiguous_groups(std::size_t n_states,
                                           std::size_t block,
                                           std::size_t* n_groups) {
  if (block == 0) {
    throw Error(ErrorCode::kInvalidArgument, "block size must be positive");
  }
  std::vector<std::size_t> group(n_states);
  for (std::size_t i = 0; i < n_states; ++i) group[i] = i / block;
  if (n_groups) *n_groups = (n_states + block - 1) / block;
  return group;
}

}  // namespace rsac
