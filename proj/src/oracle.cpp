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

#include "rsac/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "rsac/error.hpp"

namespace rsac {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Tolerance used whenever the oracle needs a spectral solution internally.
// Tighter than the perron_eigenpair default so that twisted-kernel rows close
// to 1e-10 with room to spare.
constexpr double kSpectralTol = 1e-12;

}  // namespace

Eigen::MatrixXd transition_matrix(const MdpModel& model,
                                  const SoftmaxPolicy& policy) {
  const std::size_t n = model.num_states();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      const auto row = model.trans_row(i, a);
      for (std::size_t j = 0; j < n; ++j) p(idx(i), idx(j)) += pi(idx(a)) * row[j];
    }
  }
  return p;
}

Eigen::MatrixXd build_q_matrix(const MdpModel& model,
                               const SoftmaxPolicy& policy) {
  const std::size_t n = model.num_states();
  const double alpha = model.alpha();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      const auto prow = model.trans_row(i, a);
      const auto crow = model.cost_row(i, a);
      for (std::size_t j = 0; j < n; ++j) {
        if (prow[j] > 0.0) {
          q(idx(i), idx(j)) += pi(idx(a)) * std::exp(alpha * crow[j]) * prow[j];
        }
      }
    }
  }
  return q;
}

PerronPair perron_eigenpair(const Eigen::MatrixXd& q, std::size_t ref,
                            double tol, int max_iter) {
  if (q.rows() != q.cols() || q.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "perron_eigenpair: matrix must be square and non-empty");
  }
  if (ref >= static_cast<std::size_t>(q.rows())) {
    throw Error(ErrorCode::kInvalidArgument,
                "perron_eigenpair: reference index out of range");
  }
  if (!q.allFinite() || (q.array() < 0.0).any()) {
    throw Error(ErrorCode::kInvalidArgument,
                "perron_eigenpair: matrix must be finite and nonnegative");
  }
  for (Index i = 0; i < q.rows(); ++i) {
    if (q.row(i).sum() <= 0.0) {
      throw Error(ErrorCode::kReducible,
                  "perron_eigenpair: row " + std::to_string(i) +
                      " is zero, matrix is reducible");
    }
  }

  Eigen::VectorXd v = Eigen::VectorXd::Ones(q.rows());
  Eigen::VectorXd w(q.rows());
  for (int it = 1; it <= max_iter; ++it) {
    w.noalias() = q * v;
    const double lambda = w(idx(ref));
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw Error(ErrorCode::kReducible,
                  "perron_eigenpair: reference component vanished");
    }
    // Componentwise relative residual: |(qV)(i) - lambda V(i)| / (lambda V(i)).
    double worst = 0.0;
    bool positive = true;
    for (Index i = 0; i < v.size(); ++i) {
      if (!(v(i) > 0.0)) {
        positive = false;
        break;
      }
      worst = std::max(worst, std::abs(w(i) - lambda * v(i)) / (lambda * v(i)));
    }
    if (positive && worst <= tol) {
      return {lambda, v, it};
    }
    v = w / lambda;
  }
  throw Error(ErrorCode::kIterationLimit,
              "perron_eigenpair: no convergence within " +
                  std::to_string(max_iter) + " iterations");
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& kernel,
                                        double tol, int max_iter) {
  if (kernel.rows() != kernel.cols() || kernel.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "stationary_distribution: kernel must be square");
  }
  for (Index i = 0; i < kernel.rows(); ++i) {
    if (std::abs(kernel.row(i).sum() - 1.0) > 1e-8) {
      throw Error(ErrorCode::kInvalidArgument,
                  "stationary_distribution: row " + std::to_string(i) +
                      " is not stochastic");
    }
  }
  const Index n = kernel.rows();
  Eigen::RowVectorXd d = Eigen::RowVectorXd::Constant(n, 1.0 / static_cast<double>(n));
  Eigen::RowVectorXd next(n);
  for (int it = 0; it < max_iter; ++it) {
    // Lazy chain (I + K)/2: same invariant law, aperiodic.
    next.noalias() = d * kernel;
    next = 0.5 * (next + d);
    const double change = (next - d).lpNorm<1>();
    d.swap(next);
    if (change < tol) {
      d /= d.sum();
      return d.transpose();
    }
  }
  throw Error(ErrorCode::kIterationLimit,
              "stationary_distribution: no convergence within " +
                  std::to_string(max_iter) + " iterations");
}

Eigen::MatrixXd twisted_kernel(const MdpModel& model,
                               const SoftmaxPolicy& policy,
                               const PerronPair& spectral) {
  Eigen::MatrixXd t = build_q_matrix(model, policy);
  const Eigen::VectorXd& v = spectral.value;
  for (Index i = 0; i < t.rows(); ++i) {
    for (Index j = 0; j < t.cols(); ++j) {
      t(i, j) *= v(j) / (v(i) * spectral.lambda);
    }
  }
  return t;
}

SpectralSolution solve_spectral(const MdpModel& model,
                                const SoftmaxPolicy& policy) {
  SpectralSolution s;
  const PerronPair pair = perron_eigenpair(build_q_matrix(model, policy),
                                           model.ref_state(), kSpectralTol);
  s.lambda = pair.lambda;
  s.value = pair.value;
  s.twisted = twisted_kernel(model, policy, pair);
  s.stat_orig = stationary_distribution(transition_matrix(model, policy));
  s.stat_twisted = stationary_distribution(s.twisted);
  s.cost = std::log(s.lambda);
  return s;
}

double risk_sensitive_cost(const MdpModel& model, const SoftmaxPolicy& policy) {
  return std::log(perron_eigenpair(build_q_matrix(model, policy),
                                   model.ref_state(), kSpectralTol)
                      .lambda);
}

double average_cost(const MdpModel& model, const SoftmaxPolicy& policy) {
  const Eigen::VectorXd d =
      stationary_distribution(transition_matrix(model, policy));
  double total = 0.0;
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      const auto prow = model.trans_row(i, a);
      const auto crow = model.cost_row(i, a);
      double expected = 0.0;
      for (std::size_t j = 0; j < prow.size(); ++j) expected += prow[j] * crow[j];
      total += d(idx(i)) * pi(idx(a)) * expected;
    }
  }
  return total;
}

double is_ratio(const MdpModel& model, const SpectralSolution& spectral,
                std::size_t i, std::size_t a, std::size_t j) {
  return std::exp(model.alpha() * model.c(i, a, j)) * spectral.value(idx(j)) /
         (spectral.value(idx(i)) * spectral.lambda);
}

Eigen::VectorXd cost_per_stage(const MdpModel& model,
                               const SoftmaxPolicy& policy,
                               const SpectralSolution& spectral,
                               std::size_t i, std::size_t a, std::size_t j) {
  return policy.log_grad(i, a) * (is_ratio(model, spectral, i, a, j) - 1.0);
}

Eigen::VectorXd exact_policy_gradient(const MdpModel& model,
                                      const SoftmaxPolicy& policy) {
  return exact_policy_gradient(model, policy, solve_spectral(model, policy));
}

Eigen::VectorXd exact_policy_gradient(const MdpModel& model,
                                      const SoftmaxPolicy& policy,
                                      const SpectralSolution& spectral) {
  const double alpha = model.alpha();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(idx(policy.dim()));
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    const double scale = spectral.lambda * spectral.value(idx(i));
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      const auto prow = model.trans_row(i, a);
      const auto crow = model.cost_row(i, a);
      double tilted = 0.0;
      for (std::size_t j = 0; j < prow.size(); ++j) {
        if (prow[j] > 0.0) {
          tilted += std::exp(alpha * crow[j]) * prow[j] * spectral.value(idx(j));
        }
      }
      grad += spectral.stat_twisted(idx(i)) * pi(idx(a)) * (tilted / scale - 1.0) *
              policy.log_grad(i, a, pi);
    }
  }
  return grad;
}

Eigen::VectorXd modified_avg_cost(const MdpModel& model,
                                  const SoftmaxPolicy& policy) {
  const SpectralSolution spectral = solve_spectral(model, policy);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(idx(policy.dim()));
  for (std::size_t i = 0; i < model.num_states(); ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      const Eigen::VectorXd lg = policy.log_grad(i, a, pi);
      for (std::size_t j = 0; j < model.num_states(); ++j) {
        const double pij = model.p(i, a, j);
        if (pij == 0.0) continue;
        const double g_scale = is_ratio(model, spectral, i, a, j) - 1.0;
        total += (spectral.stat_twisted(idx(i)) * pi(idx(a)) * pij * g_scale) * lg;
      }
    }
  }
  return total;
}

CriticFixedPoint critic_fixed_point(const MdpModel& model,
                                    const SoftmaxPolicy& policy,
                                    const Eigen::MatrixXd& phi) {
  const std::size_t n = model.num_states();
  if (static_cast<std::size_t>(phi.rows()) != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "critic_fixed_point: feature matrix needs |S| rows");
  }
  check_positive_cone_orthogonal(phi);

  const Eigen::VectorXd d =
      stationary_distribution(transition_matrix(model, policy));
  const Eigen::MatrixXd q = build_q_matrix(model, policy);
  const Eigen::MatrixXd dphi = d.asDiagonal() * phi;
  const Eigen::MatrixXd gram = phi.transpose() * dphi;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kFeatureDegenerate,
                "critic_fixed_point: Phi^T D Phi is singular");
  }
  // M restricted to span(sqrt(D) Phi): K = (Phi^T D Phi)^-1 Phi^T D Q Phi.
  const Eigen::MatrixXd k = lu.solve(dphi.transpose() * q * phi);

  const Eigen::RowVectorXd phi_ref = phi.row(idx(model.ref_state()));
  Index ref_feature = 0;
  phi_ref.maxCoeff(&ref_feature);
  const PerronPair pair =
      perron_eigenpair(k, static_cast<std::size_t>(ref_feature), kSpectralTol);

  CriticFixedPoint fp;
  fp.gamma = pair.lambda;
  fp.r_star = pair.value * (fp.gamma / phi_ref.dot(pair.value));

  const Eigen::VectorXd sqrt_d = d.array().sqrt();
  const Eigen::VectorXd inv_sqrt_d = sqrt_d.cwiseInverse();
  fp.m_matrix = sqrt_d.asDiagonal() * phi *
                lu.solve(dphi.transpose() * q * inv_sqrt_d.asDiagonal());
  fp.y_vec = sqrt_d.asDiagonal() * (phi * fp.r_star);
  fp.residual = (fp.m_matrix * fp.y_vec - fp.gamma * fp.y_vec).lpNorm<Eigen::Infinity>() /
                fp.y_vec.lpNorm<Eigen::Infinity>();
  return fp;
}

Eigen::MatrixXd Gtd2FixedPoint::g1() const {
  const Index m = a1.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  g.topLeftCorner(m, m) = -c1;
  g.topRightCorner(m, m) = -a1;
  g.bottomLeftCorner(m, m) = a1.transpose();
  return g;
}

double gtd2_ratio(const MdpModel& model, const Eigen::MatrixXd& phi,
                  const Eigen::VectorXd& r_theta, double delta2,
                  std::size_t i, std::size_t a, std::size_t j) {
  const double vj = phi.row(idx(j)).dot(r_theta);
  const double vi = phi.row(idx(i)).dot(r_theta);
  const double v0 = phi.row(idx(model.ref_state())).dot(r_theta);
  return std::exp(model.alpha() * model.c(i, a, j)) * vj /
         std::max(vi * v0, delta2);
}

Gtd2FixedPoint gtd2_fixed_point(const MdpModel& model,
                                const SoftmaxPolicy& policy,
                                const Eigen::VectorXd& r_theta,
                                const FeatureMaps& features, double delta2) {
  const std::size_t n = model.num_states();
  const Eigen::MatrixXd& phi = features.phi;
  const Eigen::MatrixXd& psi = features.psi;
  if (static_cast<std::size_t>(phi.rows()) != n ||
      static_cast<std::size_t>(psi.rows()) != n ||
      r_theta.size() != phi.cols()) {
    throw Error(ErrorCode::kInvalidArgument,
                "gtd2_fixed_point: feature/parameter shapes do not match model");
  }
  const Eigen::VectorXd d =
      stationary_distribution(transition_matrix(model, policy));

  Gtd2FixedPoint fp;
  fp.r_tilde_mat = Eigen::MatrixXd::Zero(idx(n), idx(n));
  fp.b1_mat = Eigen::MatrixXd::Zero(idx(n), idx(policy.dim()));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd pi = policy.probs(i);
    for (std::size_t a = 0; a < model.num_actions(); ++a) {
      double excess = 0.0;  // sum_j (g1 - 1) p
      for (std::size_t j = 0; j < n; ++j) {
        const double pij = model.p(i, a, j);
        if (pij == 0.0) continue;
        const double g1 = gtd2_ratio(model, phi, r_theta, delta2, i, a, j);
        fp.r_tilde_mat(idx(i), idx(j)) += pi(idx(a)) * pij * g1;
        excess += (g1 - 1.0) * pij;
      }
      // grad pi(i,a) = pi(i,a) grad log pi(i,a)
      fp.b1_mat.row(idx(i)) +=
          (pi(idx(a)) * excess) * policy.log_grad(i, a, pi).transpose();
    }
  }

  Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(idx(n), idx(n)) - fp.r_tilde_mat;
  shifted.col(idx(model.ref_state())).array() += 1.0;  // + E

  const Eigen::MatrixXd dpsi = d.asDiagonal() * psi;
  fp.c1 = psi.transpose() * dpsi;
  fp.a1 = dpsi.transpose() * shifted * psi;
  fp.b1 = dpsi.transpose() * fp.b1_mat;

  // Pivots below 1e-10 of the largest count as zero: an unvisited indicator
  // leaves only round-off mass in D.
  constexpr double kPivotThreshold = 1e-10;
  Eigen::FullPivLU<Eigen::MatrixXd> c_lu(fp.c1);
  c_lu.setThreshold(kPivotThreshold);
  if (!c_lu.isInvertible()) {
    throw Error(ErrorCode::kSingularMatrix,
                "gtd2_fixed_point: C1 = Psi^T D Psi is singular");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> a_lu(fp.a1);
  a_lu.setThreshold(kPivotThreshold);
  if (!a_lu.isInvertible()) {
    throw Error(ErrorCode::kSingularMatrix,
                "gtd2_fixed_point: A1 is singular");
  }
  fp.w_star = a_lu.solve(fp.b1).transpose();
  fp.grad_estimate = fp.w_star * psi.row(idx(model.ref_state())).transpose();
  return fp;
}

}  // namespace rsac
