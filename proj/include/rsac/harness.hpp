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
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rsac/features.hpp"
#include "rsac/mdp.hpp"
#include "rsac/metrics.hpp"
#include "rsac/policy.hpp"
#include "rsac/rsacfa.hpp"
#include "rsac/schedule.hpp"

namespace rsac {

enum class Algorithm { kRsacfa, kTabular, kAvgAc, kDiscAc };

const char* algorithm_name(Algorithm algorithm);

/// One experiment. Parsed from a flat `key = value` file; every field has a
/// default and all of them are echoed into the CSV preamble.
struct ExperimentConfig {
  // environment
  std::string env = "gridworld";  // "gridworld" or "file"
  std::size_t grid_side = 3;
  double slip_prob = 0.5;
  std::string boundary = "wrap";  // "wrap" or "clamp"
  std::vector<std::size_t> fixed_cost_states;  // empty: corners
  std::string model_path;                      // env = file
  std::size_t ref_state = 0;
  std::size_t start_state = 0;

  // learner
  Algorithm algorithm = Algorithm::kRsacfa;
  double alpha = 1.0;
  std::uint64_t horizon = 1000000;
  Schedules schedules;
  std::size_t aggregation = 1;         // block size of the critic features
  std::size_t policy_aggregation = 1;  // block size of the policy features
  double temperature = 1.0;
  double delta1 = 1e-6;
  double delta2 = 1e-6;
  double proj_bound = 50.0;
  double epsilon = 1e-3;
  double gamma = 0.99;
  std::uint64_t seed = 1;

  // metrics
  std::size_t window = 10000;
  std::uint64_t interval = 10000;
  bool oracle = true;
  std::size_t oracle_max_states = 2000;
  std::string output = "run.csv";

  /// Sets one field from its textual form. Throws kConfig naming the key on
  /// an unknown key or a malformed value.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  /// Throws kConfig if a field is out of its domain.
  void validate() const;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

MdpModel build_model(const ExperimentConfig& config);
FeatureMaps build_features(const ExperimentConfig& config);
SoftmaxPolicy build_policy(const ExperimentConfig& config);
RsacfaParams rsacfa_params(const ExperimentConfig& config);

/// Model file: JSON object with n_states, n_actions and flat row-major
/// `trans` and `cost` arrays of length |S|*|A|*|S|.
MdpModel load_model_file(const std::string& path, double alpha,
                         std::size_t ref_state);

struct RunSummary {
  std::vector<MetricRow> rows;
  MetricRow last;
};

/// Runs the configured learner for `horizon` steps, writing the CSV stream
/// (provenance preamble, header, one row every `interval` steps and at the
/// horizon, summary line). If `checkpoint_path` is non-empty the final
/// learner state is saved there. Throws kNumeric with the step index if an
/// iterate becomes non-finite.
RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv,
                          const std::string& checkpoint_path = {});
RunSummary run_experiment_to_file(const ExperimentConfig& config,
                                  const std::string& csv_path,
                                  const std::string& checkpoint_path = {});

struct MetricsFile {
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<MetricRow> rows;
  bool has_oracle = false;

  std::optional<std::string> provenance_value(const std::string& key) const;
};

MetricsFile read_metrics(std::istream& in);
MetricsFile read_metrics_file(const std::string& path);

/// Merges runs that share a step grid into one CSV keyed by step, with
/// <label>_mean, <label>_std, <label>_risk_cost (and <label>_oracle_cost when
/// present) per input. Throws kAlignment when the step grids differ.
void compare_runs(const std::vector<MetricsFile>& runs,
                  const std::vector<std::string>& labels, std::ostream& out);
void compare_run_files(const std::vector<std::string>& paths,
                       const std::string& out_path);

/// Checkpoints hold the complete learner state, random stream and schedule
/// parameters; doubles are written in shortest round-trip form.
struct RsacfaCheckpoint {
  RsacfaState state;
  Rng rng;
  std::size_t current_state = 0;
  Schedules schedules;
  double epsilon = 1e-3;
};

void save_rsacfa_checkpoint(const std::string& path, const RsacfaCheckpoint& cp);
RsacfaCheckpoint load_rsacfa_checkpoint(const std::string& path);

/// Actor parameter stored in any checkpoint written by run_experiment.
Eigen::VectorXd load_checkpoint_theta(const std::string& path);

/// log(lambda_theta) of the configured model under the checkpoint's policy.
double oracle_cost_from_checkpoint(const ExperimentConfig& config,
                                   const std::string& checkpoint_path);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace rsac
