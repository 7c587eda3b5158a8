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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "../oracles.hpp"
#include "rsac/error.hpp"
#include "rsac/features.hpp"
#include "rsac/gridworld.hpp"
#include "rsac/harness.hpp"
#include "rsac/metrics.hpp"
#include "rsac/oracle.hpp"
#include "rsac/rsacfa.hpp"
#include "rsac/tabular.hpp"

namespace {

using namespace rsac;
using namespace rsac::testing;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, x);
  return buf;
}

// 1. Power iteration agrees with a dense eigensolver; twisted rows sum to one.
Outcome criterion1() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::size_t> ns(1, 6), na(1, 3);
  double worst_lambda = 0.0, worst_vec = 0.0, worst_row = 0.0;
  for (int k = 0; k < 200; ++k) {
    RandomMdpShape shape;
    shape.n_states = ns(gen);
    shape.n_actions = na(gen);
    shape.alpha = (k % 2 == 0) ? 0.1 : 1.0;
    shape.ref_state = gen() % shape.n_states;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m);
    const SpectralSolution sol = solve_spectral(m, pol);
    const DenseEigen ref = dense_perron(brute_q(m, pol, m.alpha()), m.ref_state());
    worst_lambda = std::max(worst_lambda, std::abs(sol.lambda - ref.lambda) / ref.lambda);
    worst_vec = std::max(
        worst_vec, ((sol.value - ref.vec).array().abs() / ref.vec.array()).maxCoeff());
    const Eigen::VectorXd rows = sol.twisted.rowwise().sum();
    worst_row = std::max(worst_row, (rows.array() - 1.0).abs().maxCoeff());
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = worst_lambda <= 1e-8 && worst_vec <= 1e-8 && worst_row <= 1e-10 && t < 10.0;
  o.detail = "max rel lambda err " + fmt("%.2e", worst_lambda) + ", max rel V err " +
             fmt("%.2e", worst_vec) + ", max |row sum - 1| " + fmt("%.2e", worst_row) +
             ", " + fmt("%.2f", t) + " s";
  return o;
}

// 2. Exact gradient vs central differences and vs the transition-level sum.
Outcome criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<std::size_t> ns(2, 6), na(2, 3);
  double worst_fd = 0.0, worst_id = 0.0;
  for (int k = 0; k < 50; ++k) {
    RandomMdpShape shape;
    shape.n_states = ns(gen);
    shape.n_actions = na(gen);
    shape.alpha = (k % 2 == 0) ? 0.1 : 1.0;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m);
    const Eigen::VectorXd g = exact_policy_gradient(m, pol);
    const Eigen::VectorXd fd = fd_gradient(m, pol, 1e-5);
    worst_fd = std::max(worst_fd, (g - fd).norm() / fd.norm());
    worst_id = std::max(worst_id, (g - modified_avg_cost(m, pol)).cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = worst_fd < 1e-4 && worst_id <= 1e-9 && t < 30.0;
  o.detail = "max rel FD err " + fmt("%.2e", worst_fd) + ", max |grad - G~| " +
             fmt("%.2e", worst_id) + ", " + fmt("%.2f", t) + " s";
  return o;
}

// Learner with a fixed policy: only the critic (and the gradient critic) move.
Eigen::VectorXd run_fixed_policy_critic(const MdpModel& m, const SoftmaxPolicy& pol,
                                        const FeatureMaps& f, std::uint64_t steps,
                                        std::uint64_t seed) {
  Rsacfa learner(m, pol, f, RsacfaParams{}, seed);
  learner.set_actor_enabled(false);
  for (std::uint64_t n = 0; n < steps; ++n) learner.step();
  return learner.state().r;
}

// 3. Critic fixed point under aggregation features and under Phi = I.
Outcome criterion3() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(303);
  double worst_agg = 0.0, worst_tab = 0.0;
  for (int k = 0; k < 3; ++k) {
    RandomMdpShape shape;
    shape.n_states = 5;
    shape.n_actions = 2;
    shape.cost_hi = 2.0;
    shape.alpha = 1.0;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m, 0.5);

    FeatureMaps agg;
    agg.phi = aggregation_features({0, 0, 0, 1, 1}, 2);
    agg.psi = agg.phi;
    const CriticOracle oc = critic_oracle(m, pol, agg.phi);
    const Eigen::VectorXd r = run_fixed_policy_critic(m, pol, agg, 1000000, 10 + k);
    worst_agg = std::max(worst_agg, std::abs(agg.phi.row(0).dot(r) - oc.gamma) / oc.gamma);

    FeatureMaps tab;
    tab.phi = Eigen::MatrixXd::Identity(5, 5);
    tab.psi = tab.phi;
    const double lambda = exact_twist(m, pol).lambda;
    const Eigen::VectorXd rt = run_fixed_policy_critic(m, pol, tab, 1000000, 20 + k);
    worst_tab = std::max(worst_tab, std::abs(rt(0) - lambda) / lambda);
  }
  Outcome o;
  o.pass = worst_agg < 0.05 && worst_tab < 0.05;
  o.detail = "aggregation max rel err " + fmt("%.4f", worst_agg) + ", identity max rel err " +
             fmt("%.4f", worst_tab) + ", " + fmt("%.1f", seconds_since(t0)) + " s";
  return o;
}

// 4. Gradient Bellman system and the stochastic tabular gradient critic.
Outcome criterion4() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(404);
  double worst_solve = 0.0;
  for (int k = 0; k < 20; ++k) {
    RandomMdpShape shape;
    shape.n_states = 2 + k % 4;
    shape.n_actions = 2 + k % 2;
    shape.alpha = (k % 2 == 0) ? 0.5 : 1.0;
    shape.ref_state = static_cast<std::size_t>(k) % shape.n_states;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m);
    const Eigen::MatrixXd w = bellman_gradient_table(m, pol);
    const Eigen::VectorXd g = modified_avg_cost(m, pol);
    const Eigen::VectorXd w0 = w.row(ix(m.ref_state())).transpose();
    worst_solve = std::max(worst_solve, (w0 - g).cwiseAbs().maxCoeff());
  }

  double worst_sa = 0.0;
  for (int k = 0; k < 3; ++k) {
    RandomMdpShape shape;
    shape.n_states = 3;
    shape.n_actions = 2;
    shape.cost_hi = 2.0;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m, 0.5);
    const ExactTwist tw = exact_twist(m, pol);
    const Eigen::VectorXd g = exact_policy_gradient(m, pol);
    // Near-1/n gain on the gradient table; the stochastic error at 1e6
    // steps is then dominated by sampling noise, not by the step size.
    Schedules sched;
    sched.b = {0.5, 1.0, 3.0};
    TabularRsac learner(m, pol, sched, 40 + k);
    learner.freeze_critic(tw.lambda * tw.v);
    learner.set_actor_enabled(false);
    for (int n = 0; n < 1000000; ++n) learner.step();
    const Eigen::VectorXd w0 = learner.grad().w_tilde.col(ix(m.ref_state()));
    for (Eigen::Index c = 0; c < g.size(); ++c) {
      const double denom = std::max(std::abs(g(c)), 1e-3);
      worst_sa = std::max(worst_sa, std::abs(w0(c) - g(c)) / denom);
    }
  }
  Outcome o;
  o.pass = worst_solve <= 1e-8 && worst_sa < 0.10;
  o.detail = "linear solve max |W(i0) - G~| " + fmt("%.2e", worst_solve) +
             ", stochastic max componentwise rel err " + fmt("%.4f", worst_sa) + ", " +
             fmt("%.1f", seconds_since(t0)) + " s";
  return o;
}

// 5. GTD2 stability matrix and stochastic convergence to its fixed point.
Outcome criterion5() {
  const auto t0 = Clock::now();
  std::mt19937_64 gen(505);
  double max_real = -INFINITY;
  double worst_rel = 0.0;
  int used = 0;
  while (used < 30) {
    RandomMdpShape shape;
    shape.n_states = 4;
    shape.n_actions = 2;
    shape.cost_hi = 1.0;
    shape.alpha = 1.0;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m, 0.5);
    FeatureMaps f;
    f.phi = Eigen::MatrixXd::Identity(4, 4);
    f.psi = (used % 2 == 0) ? f.phi : aggregation_features({0, 0, 1, 1}, 2);
    const ExactTwist tw = exact_twist(m, pol);
    const Eigen::VectorXd r = tw.lambda * tw.v;

    Gtd2FixedPoint fp;
    try {
      fp = gtd2_fixed_point(m, pol, r, f, 1e-6);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kSingularMatrix) continue;
      throw;
    }
    ++used;
    Eigen::EigenSolver<Eigen::MatrixXd> es(fp.g1(), false);
    max_real = std::max(max_real, es.eigenvalues().real().maxCoeff());

    RsacfaParams params;
    params.schedules.b = {1.0, 1.0, 30.0};
    Rsacfa learner(m, pol, f, params, 600 + static_cast<std::uint64_t>(used));
    learner.freeze_critic(r);
    learner.set_actor_enabled(false);
    for (int n = 0; n < 1000000; ++n) learner.step();
    const double rel =
        (learner.state().w_tilde - fp.w_star).norm() / fp.w_star.norm();
    worst_rel = std::max(worst_rel, rel);
  }
  Outcome o;
  o.pass = max_real < 0.0 && worst_rel < 0.10;
  o.detail = "max Re(eig G1) " + fmt("%.3e", max_real) + " (margin " +
             fmt("%.3e", -max_real) + "), max rel Frobenius err " + fmt("%.4f", worst_rel) +
             ", " + fmt("%.1f", seconds_since(t0)) + " s";
  return o;
}

// 6. Sherman-Morrison inverse stays consistent with the explicit B.
Outcome criterion6() {
  std::mt19937_64 gen(606);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int x2 = 5;
  FeatureMaps f;
  f.phi = Eigen::MatrixXd(50, x2);
  for (Eigen::Index i = 0; i < f.phi.rows(); ++i)
    for (Eigen::Index c = 0; c < x2; ++c) f.phi(i, c) = normal(gen);
  f.psi = f.phi;
  RsacfaParams params;
  RsacfaState s;
  s.a_mat = Eigen::MatrixXd::Zero(x2, x2);
  s.b_inv = Eigen::MatrixXd::Identity(x2, x2) / params.epsilon;
  Eigen::MatrixXd b = params.epsilon * Eigen::MatrixXd::Identity(x2, x2);
  std::uniform_int_distribution<std::size_t> pick(0, 49);
  for (int n = 0; n < 10000; ++n) {
    Transition tr{pick(gen), 0, pick(gen), 0.0};
    update_ab(s, f, tr, 1.0);
    b += f.phi.row(ix(tr.state)).transpose() * f.phi.row(ix(tr.state));
  }
  const double err = (s.b_inv * b - Eigen::MatrixXd::Identity(x2, x2)).norm();
  return {err <= 1e-6, "||B^-1 B - I||_F = " + fmt("%.2e", err)};
}

// 7. Gridworld cost moments and Monte-Carlo mean under the uniform policy.
Outcome criterion7() {
  double worst_moment = 0.0;
  for (std::size_t side : {3u, 10u}) {
    GridConfig cfg;
    cfg.side = side;
    const MdpModel m = build_gridworld(cfg, 1.0);
    const auto fixed = corner_states(side);
    for (std::size_t i = 0; i < m.num_states(); ++i) {
      if (std::find(fixed.begin(), fixed.end(), i) != fixed.end()) continue;
      for (std::size_t a = 0; a < m.num_actions(); ++a) {
        double mean = 0.0, sq = 0.0;
        for (std::size_t j = 0; j < m.num_states(); ++j) {
          mean += m.p(i, a, j) * m.c(i, a, j);
          sq += m.p(i, a, j) * m.c(i, a, j) * m.c(i, a, j);
        }
        const double sd = std::sqrt(std::max(0.0, sq - mean * mean));
        const double want_mean = (a % 2 == 0) ? 7.0 : 5.0;
        const double want_sd = (a % 2 == 0) ? 1.0 : 4.0;
        worst_moment = std::max(
            {worst_moment, std::abs(mean - want_mean), std::abs(sd - want_sd)});
      }
    }
  }

  const MdpModel grid = build_gridworld(GridConfig{}, 1.0);
  const SoftmaxPolicy uniform = tabular_softmax(grid.num_states(), grid.num_actions());
  const double oracle = oracle_average_cost(grid, uniform);
  const Trajectory traj = simulate(grid, uniform, 0, 1000000, 7);
  double total = 0.0;
  for (double c : traj.costs) total += c;
  const double mc = total / static_cast<double>(traj.costs.size());
  const double rel = std::abs(mc - oracle) / oracle;
  Outcome o;
  o.pass = worst_moment <= 1e-12 && rel < 0.01;
  o.detail = "max moment err " + fmt("%.2e", worst_moment) + ", MC mean " + fmt("%.5f", mc) +
             " vs oracle " + fmt("%.5f", oracle) + " (rel " + fmt("%.2e", rel) + ")";
  return o;
}

RunSummary run_grid(Algorithm algo, double alpha, double c0) {
  ExperimentConfig cfg;
  cfg.algorithm = algo;
  cfg.alpha = alpha;
  cfg.horizon = 1000000;
  cfg.window = 10000;
  cfg.interval = 10000;
  cfg.seed = 1;
  cfg.schedules.c.scale = c0;
  std::ostringstream sink;
  return run_experiment(cfg, sink);
}

// 8. Desk-scale qualitative comparison on the 3x3 grid.
Outcome criterion8() {
  const auto t0 = Clock::now();
  const RunSummary rs1 = run_grid(Algorithm::kRsacfa, 1.0, 0.01);
  const RunSummary avg1 = run_grid(Algorithm::kAvgAc, 1.0, 0.01);
  // At alpha = 0.001 the risk-sensitive gradient is scaled by alpha, so the
  // actor rate is raised to keep its effective step comparable.
  const RunSummary rs2 = run_grid(Algorithm::kRsacfa, 0.001, 3.0);
  const RunSummary avg2 = run_grid(Algorithm::kAvgAc, 0.001, 0.01);
  const bool std_lower = rs1.last.std < avg1.last.std;
  const bool risk_down = rs1.last.risk_cost < rs1.rows.front().risk_cost;
  const double mean_rel = std::abs(rs2.last.mean - avg2.last.mean) / avg2.last.mean;
  const double t = seconds_since(t0);
  Outcome o;
  o.pass = std_lower && risk_down && mean_rel < 0.05 && t < 600.0;
  o.detail = "alpha=1 std rsacfa " + fmt("%.4f", rs1.last.std) + " vs avg_ac " +
             fmt("%.4f", avg1.last.std) + "; risk cost " +
             fmt("%.4f", rs1.rows.front().risk_cost) + " -> " + fmt("%.4f", rs1.last.risk_cost) +
             "; alpha=0.001 mean rsacfa " + fmt("%.4f", rs2.last.mean) + " vs avg_ac " +
             fmt("%.4f", avg2.last.mean) + " (rel " + fmt("%.4f", mean_rel) + "), " +
             fmt("%.1f", t) + " s";
  return o;
}

// 9. Small-alpha limit of the risk-sensitive cost.
Outcome criterion9() {
  std::mt19937_64 gen(909);
  std::uniform_int_distribution<std::size_t> ns(2, 6), na(1, 3);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    RandomMdpShape shape;
    shape.n_states = ns(gen);
    shape.n_actions = na(gen);
    shape.alpha = 1e-4;
    const MdpModel m = random_mdp(gen, shape);
    const SoftmaxPolicy pol = random_tabular_policy(gen, m);
    const double scaled = risk_sensitive_cost(m, pol) / m.alpha();
    const double avg = oracle_average_cost(m, pol);
    worst = std::max(worst, std::abs(scaled - avg) / std::abs(avg));
  }
  return {worst < 1e-3, "max rel err " + fmt("%.2e", worst)};
}

std::string strip_elapsed(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') line = line.substr(0, line.rfind(','));
    out += line + '\n';
  }
  return out;
}

// 10. Same config and seed give byte-identical metrics.
Outcome criterion10() {
  ExperimentConfig cfg;
  cfg.horizon = 200000;
  cfg.seed = 77;
  std::string runs[2];
  for (auto& r : runs) {
    std::ostringstream out;
    run_experiment(cfg, out);
    r = strip_elapsed(out.str());
  }
  const bool same = runs[0] == runs[1];
  return {same, same ? "identical (" + std::to_string(runs[0].size()) + " bytes)"
                     : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4, criterion5,
      criterion6, criterion7, criterion8, criterion9, criterion10};
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("criterion %zu: %s  %s\n", k + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
