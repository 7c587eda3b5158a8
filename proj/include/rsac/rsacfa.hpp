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
#include <functional>

#include <Eigen/Dense>

#include "rsac/features.hpp"
#include "rsac/mdp.hpp"
#include "rsac/policy.hpp"
#include "rsac/schedule.hpp"

namespace rsac {

struct RsacfaParams {
  double delta1 = 1e-6;  // floor on phi(i0)^T r in the critic divisor
  double delta2 = 1e-6;  // floor on the importance-ratio denominator
  double proj_bound = 50.0;  // actor box [-proj_bound, proj_bound]^x1
  double epsilon = 1e-3;     // B starts at epsilon * I
  Schedules schedules;
};

/// Learner state of the function-approximation actor-critic.
struct RsacfaState {
  Eigen::VectorXd r;        // critic weights, x2
  Eigen::MatrixXd a_mat;    // A_n, x2 x x2
  Eigen::MatrixXd b_inv;    // B_n^-1, x2 x x2, symmetric positive definite
  Eigen::MatrixXd u;        // GTD2 auxiliary weights, x1 x x3
  Eigen::MatrixXd w_tilde;  // gradient critic, x1 x x3
  Eigen::VectorXd theta;    // actor, x1
  std::uint64_t n = 0;
  double delta1 = 1e-6;
  double delta2 = 1e-6;
  double proj_bound = 50.0;
};

/// Initial state: r0 is the least-squares fit of the all-ones value vector
/// scaled so that phi(i0)^T r0 = 1 (r = 0 is a spurious fixed point of the
/// critic), B^-1 = I / epsilon, A = u = w~ = 0.
RsacfaState initial_rsacfa_state(const FeatureMaps& features,
                                 std::size_t ref_state,
                                 const Eigen::VectorXd& theta0,
                                 const RsacfaParams& params);

/// A += exp(alpha c) phi(i) phi(j)^T and the Sherman-Morrison rank-one update
/// B^-1 -= B^-1 phi(i) phi(i)^T B^-1 / (1 + phi(i)^T B^-1 phi(i)).
void update_ab(RsacfaState& state, const FeatureMaps& features,
               const Transition& tr, double alpha);

/// r += a_n (B^-1 A / max(phi(i0)^T r, delta1) - I) r.
void critic_step_fa(RsacfaState& state, const FeatureMaps& features,
                    std::size_t ref_state, double a_n);

/// rho~ = exp(alpha c) r^T phi(j) / max(r^T phi(i) r^T phi(i0), delta2).
double is_ratio_fa(const RsacfaState& state, const FeatureMaps& features,
                   const Transition& tr, double alpha, std::size_t ref_state);

/// delta_n = (rho~ - 1) grad log pi(i,z) + rho~ w~ psi(j) - w~ psi(i) - w~ psi(i0).
Eigen::VectorXd td_error(const RsacfaState& state, const FeatureMaps& features,
                         const Transition& tr,
                         const Eigen::VectorXd& grad_log_pi, double rho,
                         std::size_t ref_state);

/// u += b_n (delta - u psi(i)) psi(i)^T,
/// w~ += b_n u psi(i) (psi(i) + psi(i0) - rho~ psi(j))^T, both from the old u.
void gtd2_step(RsacfaState& state, const FeatureMaps& features,
               const Transition& tr, const Eigen::VectorXd& delta, double rho,
               std::size_t ref_state, double b_n);

/// Componentwise clamp onto [-bound, bound].
Eigen::VectorXd project_box(const Eigen::VectorXd& x, double bound);

/// theta = Gamma(theta - c_n w~ psi(i0)).
void actor_step_fa(RsacfaState& state, const FeatureMaps& features,
                   std::size_t ref_state, double c_n);

/// Online learner running the per-step sequence: sample, fold the transition
/// into A and B^-1, critic, TD error, GTD2, projected actor. All right-hand
/// sides other than A and B^-1 use the values held before the step.
class Rsacfa {
 public:
  Rsacfa(const MdpModel& model, const SoftmaxPolicy& policy,
         FeatureMaps features, RsacfaParams params, std::uint64_t seed,
         std::size_t start_state = 0);

  /// Freeze the critic at r (it is then neither updated nor are A, B^-1).
  void freeze_critic(const Eigen::VectorXd& r);
  void set_actor_enabled(bool enabled) { actor_enabled_ = enabled; }

  Transition step();

  const RsacfaState& state() const { return state_; }
  RsacfaState& mutable_state() { return state_; }
  const SoftmaxPolicy& policy() const { return policy_; }
  const FeatureMaps& features() const { return features_; }
  const RsacfaParams& params() const { return params_; }
  const Rng& rng() const { return rng_; }
  std::size_t current_state() const { return current_; }

  /// Restores a saved state, random stream and position.
  void restore(const RsacfaState& state, const Rng& rng, std::size_t current);

 private:
  const MdpModel* model_;
  SoftmaxPolicy policy_;
  FeatureMaps features_;
  RsacfaParams params_;
  RsacfaState state_;
  Rng rng_;
  std::size_t current_;
  bool critic_frozen_ = false;
  bool actor_enabled_ = true;
};

/// Runs `horizon` steps of a fresh learner. `on_step` (optional) sees every
/// transition after it has been applied.
RsacfaState run_algorithm1(
    const MdpModel& model, const SoftmaxPolicy& policy0,
    const FeatureMaps& features, const RsacfaParams& params,
    std::uint64_t horizon, std::uint64_t seed,
    const std::function<void(const Rsacfa&, const Transition&)>& on_step = {});

}  // namespace rsac
