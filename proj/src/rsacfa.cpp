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

#include "rsac/rsacfa.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rsac/error.hpp"

namespace rsac {
namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

// Nonzero pattern of a feature row. Indicator and aggregation features are
// very sparse, and every product below only needs to touch these entries;
// skipped terms are exact zeros, so the arithmetic matches the dense form.
struct SparseRow {
  std::vector<Eigen::Index> idx;
  std::vector<double> val;
};

template <typename Row>
SparseRow nonzeros(const Row& row) {
  SparseRow out;
  for (Eigen::Index k = 0; k < row.size(); ++k) {
    if (row(k) != 0.0) {
      out.idx.push_back(k);
      out.val.push_back(row(k));
    }
  }
  return out;
}

// m * x for a sparse x.
Eigen::VectorXd times(const Eigen::MatrixXd& m, const SparseRow& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m.rows());
  for (std::size_t k = 0; k < x.idx.size(); ++k) out.noalias() += x.val[k] * m.col(x.idx[k]);
  return out;
}

// m += col * x^T for a sparse x.
void add_outer(Eigen::MatrixXd& m, const Eigen::VectorXd& col, const SparseRow& x) {
  for (std::size_t k = 0; k < x.idx.size(); ++k) m.col(x.idx[k]).noalias() += x.val[k] * col;
}

void require_finite(bool ok, const char* what, std::uint64_t n) {
  if (!ok) {
    throw Error(ErrorCode::kNumeric, std::string("rsacfa: non-finite ") + what +
                                         " at step " + std::to_string(n));
  }
}

}  // namespace

RsacfaState initial_rsacfa_state(const FeatureMaps& features,
                                 std::size_t ref_state,
                                 const Eigen::VectorXd& theta0,
                                 const RsacfaParams& params) {
  if (!(params.epsilon > 0.0) || !(params.delta1 > 0.0) ||
      !(params.delta2 > 0.0) || !(params.proj_bound > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "rsacfa: epsilon, delta1, delta2 and proj_bound must be positive");
  }
  if (features.phi.rows() != features.psi.rows() ||
      ref_state >= features.num_states()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rsacfa: feature maps and reference state disagree");
  }
  const Eigen::Index x2 = features.phi.cols();
  const Eigen::Index x3 = features.psi.cols();
  const Eigen::Index x1 = theta0.size();

  RsacfaState s;
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(features.phi.rows());
  s.r = features.phi.colPivHouseholderQr().solve(ones);
  const double at_ref = features.phi.row(idx(ref_state)).dot(s.r);
  if (!(at_ref > 0.0) || !s.r.allFinite()) {
    throw Error(ErrorCode::kFeatureDegenerate,
                "rsacfa: cannot initialise critic with phi(i0)^T r0 > 0");
  }
  s.r /= at_ref;
  s.a_mat = Eigen::MatrixXd::Zero(x2, x2);
  s.b_inv = Eigen::MatrixXd::Identity(x2, x2) / params.epsilon;
  s.u = Eigen::MatrixXd::Zero(x1, x3);
  s.w_tilde = Eigen::MatrixXd::Zero(x1, x3);
  s.theta = project_box(theta0, params.proj_bound);
  s.delta1 = params.delta1;
  s.delta2 = params.delta2;
  s.proj_bound = params.proj_bound;
  return s;
}

void update_ab(RsacfaState& state, const FeatureMaps& features,
               const Transition& tr, double alpha) {
  const SparseRow phi_i = nonzeros(features.phi.row(idx(tr.state)));
  const SparseRow phi_j = nonzeros(features.phi.row(idx(tr.next)));
  const Eigen::VectorXd scaled_phi_i =
      std::exp(alpha * tr.cost) * features.phi.row(idx(tr.state)).transpose();
  add_outer(state.a_mat, scaled_phi_i, phi_j);

  // Sherman-Morrison. Each entry is B_kl - (v_k v_l) / denom, which keeps a
  // symmetric B^-1 exactly symmetric; only the support of v is touched.
  const Eigen::VectorXd bphi = times(state.b_inv, phi_i);
  double quad = 0.0;
  for (std::size_t k = 0; k < phi_i.idx.size(); ++k) quad += phi_i.val[k] * bphi(phi_i.idx[k]);
  const double denom = 1.0 + quad;
  const SparseRow v = nonzeros(bphi);
  for (std::size_t c = 0; c < v.idx.size(); ++c) {
    for (std::size_t r = 0; r < v.idx.size(); ++r) {
      state.b_inv(v.idx[r], v.idx[c]) -= (v.val[r] * v.val[c]) / denom;
    }
  }
}

void critic_step_fa(RsacfaState& state, const FeatureMaps& features,
                    std::size_t ref_state, double a_n) {
  const double scale =
      std::max(features.phi.row(idx(ref_state)).dot(state.r), state.delta1);
  const Eigen::VectorXd target = state.b_inv * (state.a_mat * state.r) / scale;
  state.r += a_n * (target - state.r);
}

double is_ratio_fa(const RsacfaState& state, const FeatureMaps& features,
                   const Transition& tr, double alpha, std::size_t ref_state) {
  const double vj = features.phi.row(idx(tr.next)).dot(state.r);
  const double vi = features.phi.row(idx(tr.state)).dot(state.r);
  const double v0 = features.phi.row(idx(ref_state)).dot(state.r);
  return std::exp(alpha * tr.cost) * vj / std::max(vi * v0, state.delta2);
}

Eigen::VectorXd td_error(const RsacfaState& state, const FeatureMaps& features,
                         const Transition& tr,
                         const Eigen::VectorXd& grad_log_pi, double rho,
                         std::size_t ref_state) {
  const auto& psi = features.psi;
  const Eigen::RowVectorXd combo =
      rho * psi.row(idx(tr.next)) - psi.row(idx(tr.state)) - psi.row(idx(ref_state));
  return (rho - 1.0) * grad_log_pi + times(state.w_tilde, nonzeros(combo));
}

void gtd2_step(RsacfaState& state, const FeatureMaps& features,
               const Transition& tr, const Eigen::VectorXd& delta, double rho,
               std::size_t ref_state, double b_n) {
  const auto& psi = features.psi;
  const SparseRow psi_i = nonzeros(psi.row(idx(tr.state)));
  const Eigen::VectorXd u_psi = times(state.u, psi_i);
  const SparseRow direction = nonzeros(
      psi.row(idx(tr.state)) + psi.row(idx(ref_state)) - rho * psi.row(idx(tr.next)));
  add_outer(state.u, b_n * (delta - u_psi), psi_i);
  add_outer(state.w_tilde, b_n * u_psi, direction);
}

Eigen::VectorXd project_box(const Eigen::VectorXd& x, double bound) {
  return x.cwiseMax(-bound).cwiseMin(bound);
}

void actor_step_fa(RsacfaState& state, const FeatureMaps& features,
                   std::size_t ref_state, double c_n) {
  const Eigen::VectorXd grad =
      state.w_tilde * features.psi.row(idx(ref_state)).transpose();
  state.theta = project_box(state.theta - c_n * grad, state.proj_bound);
}

Rsacfa::Rsacfa(const MdpModel& model, const SoftmaxPolicy& policy,
               FeatureMaps features, RsacfaParams params, std::uint64_t seed,
               std::size_t start_state)
    : model_(&model),
      policy_(policy),
      features_(std::move(features)),
      params_(params),
      rng_(seed),
      current_(start_state) {
  if (features_.num_states() != model.num_states() ||
      policy_.num_states() != model.num_states() ||
      policy_.num_actions() != model.num_actions()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rsacfa: model, policy and features disagree on dimensions");
  }
  if (start_state >= model.num_states()) {
    throw Error(ErrorCode::kInvalidArgument, "rsacfa: start state out of range");
  }
  state_ = initial_rsacfa_state(features_, model.ref_state(), policy_.theta(),
                                params_);
  policy_.set_theta(state_.theta);
}

void Rsacfa::freeze_critic(const Eigen::VectorXd& r) {
  if (r.size() != state_.r.size()) {
    throw Error(ErrorCode::kInvalidArgument, "rsacfa: frozen critic has wrong size");
  }
  state_.r = r;
  critic_frozen_ = true;
}

void Rsacfa::restore(const RsacfaState& state, const Rng& rng,
                     std::size_t current) {
  if (state.r.size() != state_.r.size() || state.theta.size() != state_.theta.size() ||
      state.w_tilde.rows() != state_.w_tilde.rows() ||
      state.w_tilde.cols() != state_.w_tilde.cols() ||
      current >= model_->num_states()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rsacfa: restored state does not match the learner shape");
  }
  state_ = state;
  rng_ = rng;
  current_ = current;
  policy_.set_theta(state_.theta);
}

Transition Rsacfa::step() {
  const std::size_t ref = model_->ref_state();
  const double alpha = model_->alpha();
  const std::uint64_t n = state_.n;

  const Eigen::VectorXd pi = policy_.probs(current_);
  Transition tr;
  tr.state = current_;
  tr.action = sample_index({pi.data(), static_cast<std::size_t>(pi.size())}, rng_);
  const StepOutcome out = sample_step(*model_, tr.state, tr.action, rng_);
  tr.next = out.next;
  tr.cost = out.cost;

  // Quantities that must see step-n values of r, w~ and theta.
  const double rho = is_ratio_fa(state_, features_, tr, alpha, ref);
  require_finite(std::isfinite(rho), "importance ratio", n);
  const Eigen::VectorXd delta = td_error(
      state_, features_, tr, policy_.log_grad(tr.state, tr.action, pi), rho, ref);
  require_finite(delta.allFinite(), "TD error", n);

  if (!critic_frozen_) {
    update_ab(state_, features_, tr, alpha);
    critic_step_fa(state_, features_, ref, params_.schedules.a(n));
    require_finite(state_.r.allFinite(), "critic", n);
  }
  if (actor_enabled_) {
    actor_step_fa(state_, features_, ref, params_.schedules.c(n));
    require_finite(state_.theta.allFinite(), "actor parameter", n);
  }
  gtd2_step(state_, features_, tr, delta, rho, ref, params_.schedules.b(n));

  if (actor_enabled_) policy_.set_theta(state_.theta);
  current_ = tr.next;
  ++state_.n;
  return tr;
}

RsacfaState run_algorithm1(
    const MdpModel& model, const SoftmaxPolicy& policy0,
    const FeatureMaps& features, const RsacfaParams& params,
    std::uint64_t horizon, std::uint64_t seed,
    const std::function<void(const Rsacfa&, const Transition&)>& on_step) {
  Rsacfa learner(model, policy0, features, params, seed);
  for (std::uint64_t n = 0; n < horizon; ++n) {
    Transition tr;
    try {
      tr = learner.step();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kNumeric) throw;
      throw Error(e.code(), std::string(e.what()) + " (step " + std::to_string(n) + ")");
    }
    if (on_step) on_step(learner, tr);
  }
  return learner.state();
}

}  // namespace rsac
