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

#include <Eigen/Dense>

#include "rsac/features.hpp"
#include "rsac/mdp.hpp"
#include "rsac/policy.hpp"

namespace rsac {

// Model-based ground truth for a fixed policy. Everything here is a pure
// function of its inputs and safe to call concurrently.

/// P_pi(i,j) = sum_a pi(i,a) p(i,a,j).
Eigen::MatrixXd transition_matrix(const MdpModel& model,
                                  const SoftmaxPolicy& policy);

/// Q_pi(i,j) = sum_a pi(i,a) exp(alpha c(i,a,j)) p(i,a,j).
Eigen::MatrixXd build_q_matrix(const MdpModel& model,
                               const SoftmaxPolicy& policy);

struct PerronPair {
  double lambda = 0.0;
  Eigen::VectorXd value;  // value(ref) == 1
  int iterations = 0;
};

/// Relative value iteration V <- qV / (qV)(ref). Stops once
/// ||qV - lambda V||_inf <= tol * lambda * ||V||_inf.
/// Throws kReducible on a zero or negative row and kIterationLimit when
/// max_iter sweeps do not reach tol.
PerronPair perron_eigenpair(const Eigen::MatrixXd& q, std::size_t ref,
                            double tol = 1e-10, int max_iter = 100000);

/// Invariant law of a row-stochastic kernel (lazy-chain iteration, so
/// periodic kernels are handled), stopping when ||d_{n+1} - d_n||_1 < tol.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& kernel,
                                        double tol = 1e-12,
                                        int max_iter = 1000000);

/// p~(i,j) = Q(i,j) V(j) / (V(i) lambda).
Eigen::MatrixXd twisted_kernel(const MdpModel& model,
                               const SoftmaxPolicy& policy,
                               const PerronPair& spectral);

struct SpectralSolution {
  double lambda = 0.0;
  Eigen::VectorXd value;
  Eigen::MatrixXd twisted;
  Eigen::VectorXd stat_orig;
  Eigen::VectorXd stat_twisted;
  double cost = 0.0;  // log lambda
};

SpectralSolution solve_spectral(const MdpModel& model,
                                const SoftmaxPolicy& policy);

/// Long-run risk-sensitive cost log(lambda_pi).
double risk_sensitive_cost(const MdpModel& model, const SoftmaxPolicy& policy);

/// Risk-neutral long-run average cost sum_i d(i) sum_a pi sum_j p c.
double average_cost(const MdpModel& model, const SoftmaxPolicy& policy);

/// rho(i,a,j) = exp(alpha c(i,a,j)) V(j) / (V(i) lambda).
double is_ratio(const MdpModel& model, const SpectralSolution& spectral,
                std::size_t i, std::size_t a, std::size_t j);

/// g(i,a,j) = grad log pi(i,a) (rho(i,a,j) - 1).
Eigen::VectorXd cost_per_stage(const MdpModel& model,
                               const SoftmaxPolicy& policy,
                               const SpectralSolution& spectral,
                               std::size_t i, std::size_t a, std::size_t j);

/// grad_theta log lambda from the baseline-one policy gradient formula,
/// weighted by the twisted stationary law.
Eigen::VectorXd exact_policy_gradient(const MdpModel& model,
                                      const SoftmaxPolicy& policy);
Eigen::VectorXd exact_policy_gradient(const MdpModel& model,
                                      const SoftmaxPolicy& policy,
                                      const SpectralSolution& spectral);

/// G~(pi) = sum_i d~(i) sum_a pi(i,a) sum_j p(i,a,j) g(i,a,j), assembled
/// transition by transition. Equal to exact_policy_gradient.
Eigen::VectorXd modified_avg_cost(const MdpModel& model,
                                  const SoftmaxPolicy& policy);

/// Expected fixed point of the linear-feature multiplicative critic.
struct CriticFixedPoint {
  Eigen::MatrixXd m_matrix;  // sqrt(D) Phi (Phi^T D Phi)^-1 Phi^T D Q sqrt(D)^-1
  double gamma = 0.0;        // Perron root of m_matrix
  Eigen::VectorXd y_vec;     // sqrt(D) Phi r_star
  Eigen::VectorXd r_star;    // normalised so phi(ref)^T r_star == gamma
  double residual = 0.0;     // ||M Y - gamma Y||_inf / ||Y||_inf
};

/// Throws kFeatureDegenerate when Phi^T D Phi is singular.
CriticFixedPoint critic_fixed_point(const MdpModel& model,
                                    const SoftmaxPolicy& policy,
                                    const Eigen::MatrixXd& phi);

/// Expected fixed point of the importance-sampled GTD2 gradient critic.
struct Gtd2FixedPoint {
  Eigen::MatrixXd r_tilde_mat;  // R~(i,j) = sum_a pi p g1
  Eigen::MatrixXd b1_mat;       // |S| x x1, rows B1(i)
  Eigen::MatrixXd c1;           // Psi^T D Psi
  Eigen::MatrixXd a1;           // Psi^T D (I + E - R~) Psi
  Eigen::MatrixXd b1;           // Psi^T D B1, x3 x x1
  Eigen::MatrixXd w_star;       // (a1^-1 b1)^T, x1 x x3
  Eigen::VectorXd grad_estimate;  // w_star psi(ref)

  /// G1 = [[-C1, -A1], [A1^T, 0]].
  Eigen::MatrixXd g1() const;
};

/// g1(i,a,j) = exp(alpha c) r^T phi(j) / max(r^T phi(i) r^T phi(ref), delta2).
double gtd2_ratio(const MdpModel& model, const Eigen::MatrixXd& phi,
                  const Eigen::VectorXd& r_theta, double delta2,
                  std::size_t i, std::size_t a, std::size_t j);

/// Throws kSingularMatrix when A1 or C1 is singular.
Gtd2FixedPoint gtd2_fixed_point(const MdpModel& model,
                                const SoftmaxPolicy& policy,
                                const Eigen::VectorXd& r_theta,
                                const FeatureMaps& features, double delta2);

}  // namespace rsac
