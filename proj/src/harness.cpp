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

#include "rsac/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "rsac/baselines.hpp"
#include "rsac/error.hpp"
#include "rsac/gridworld.hpp"
#include "rsac/oracle.hpp"
#include "rsac/tabular.hpp"

namespace rsac {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw Error(ErrorCode::kConfig, "config field '" + key + "': cannot parse '" +
                                      value + "' as " + expected);
}

double parse_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(x)) {
    bad_value(key, value, "a finite number");
  }
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  const char* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, x);
  if (res.ec == std::errc() && res.ptr == end) return x;
  // Accept integral values written in floating form, e.g. 1e6.
  double d = 0.0;
  const auto dres = std::from_chars(value.data(), end, d);
  if (dres.ec == std::errc() && dres.ptr == end && d >= 0.0 && d <= 9.0e18 &&
      std::floor(d) == d) {
    return static_cast<std::uint64_t>(d);
  }
  bad_value(key, value, "a non-negative integer");
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::size_t> parse_index_list(const std::string& key,
                                          const std::string& value) {
  std::vector<std::size_t> out;
  if (value.empty() || value == "corners") return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<std::size_t>(parse_u64(key, trim(item))));
  }
  return out;
}

std::string join_indices(const std::vector<std::size_t>& v) {
  if (v.empty()) return "corners";
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(v[k]);
  }
  return s;
}

Algorithm parse_algorithm(const std::string& key, const std::string& value) {
  if (value == "rsacfa") return Algorithm::kRsacfa;
  if (value == "tabular") return Algorithm::kTabular;
  if (value == "avg_ac") return Algorithm::kAvgAc;
  if (value == "disc_ac") return Algorithm::kDiscAc;
  bad_value(key, value, "one of rsacfa, tabular, avg_ac, disc_ac");
}

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define RSAC_DOUBLE_FIELD(name, member)                                     \
  Field {                                                                   \
    name,                                                                   \
        [](ExperimentConfig& c, const std::string& v) {                     \
          c.member = parse_double(name, v);                                 \
        },                                                                  \
        [](const ExperimentConfig& c) { return format_double(c.member); }   \
  }
#define RSAC_UINT_FIELD(name, member, type)                                 \
  Field {                                                                   \
    name,                                                                   \
        [](ExperimentConfig& c, const std::string& v) {                     \
          c.member = static_cast<type>(parse_u64(name, v));                 \
        },                                                                  \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }  \
  }
#define RSAC_STRING_FIELD(name, member)                                     \
  Field {                                                                   \
    name, [](ExperimentConfig& c, const std::string& v) { c.member = v; },  \
        [](const ExperimentConfig& c) { return c.member; }                  \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      RSAC_STRING_FIELD("env", env),
      RSAC_STRING_FIELD("model_path", model_path),
      RSAC_UINT_FIELD("grid_side", grid_side, std::size_t),
      RSAC_DOUBLE_FIELD("slip_prob", slip_prob),
      RSAC_STRING_FIELD("boundary", boundary),
      Field{"fixed_cost_states",
            [](ExperimentConfig& c, const std::string& v) {
              c.fixed_cost_states = parse_index_list("fixed_cost_states", v);
            },
            [](const ExperimentConfig& c) { return join_indices(c.fixed_cost_states); }},
      RSAC_UINT_FIELD("ref_state", ref_state, std::size_t),
      RSAC_UINT_FIELD("start_state", start_state, std::size_t),
      Field{"algorithm",
            [](ExperimentConfig& c, const std::string& v) {
              c.algorithm = parse_algorithm("algorithm", v);
            },
            [](const ExperimentConfig& c) {
              return std::string(algorithm_name(c.algorithm));
            }},
      RSAC_DOUBLE_FIELD("alpha", alpha),
      RSAC_UINT_FIELD("horizon", horizon, std::uint64_t),
      RSAC_DOUBLE_FIELD("a0", schedules.a.scale),
      RSAC_DOUBLE_FIELD("a_exp", schedules.a.exponent),
      RSAC_DOUBLE_FIELD("b0", schedules.b.scale),
      RSAC_DOUBLE_FIELD("b_exp", schedules.b.exponent),
      RSAC_DOUBLE_FIELD("c0", schedules.c.scale),
      RSAC_DOUBLE_FIELD("c_exp", schedules.c.exponent),
      Field{"tau",
            [](ExperimentConfig& c, const std::string& v) {
              const double t = parse_double("tau", v);
              c.schedules.a.tau = c.schedules.b.tau = c.schedules.c.tau = t;
            },
            [](const ExperimentConfig& c) { return format_double(c.schedules.a.tau); }},
      RSAC_UINT_FIELD("aggregation", aggregation, std::size_t),
      RSAC_UINT_FIELD("policy_aggregation", policy_aggregation, std::size_t),
      RSAC_DOUBLE_FIELD("temperature", temperature),
      RSAC_DOUBLE_FIELD("delta1", delta1),
      RSAC_DOUBLE_FIELD("delta2", delta2),
      RSAC_DOUBLE_FIELD("proj_bound", proj_bound),
      RSAC_DOUBLE_FIELD("epsilon", epsilon),
      RSAC_DOUBLE_FIELD("gamma", gamma),
      RSAC_UINT_FIELD("seed", seed, std::uint64_t),
      RSAC_UINT_FIELD("window", window, std::size_t),
      RSAC_UINT_FIELD("interval", interval, std::uint64_t),
      Field{"oracle",
            [](ExperimentConfig& c, const std::string& v) {
              c.oracle = parse_bool("oracle", v);
            },
            [](const ExperimentConfig& c) {
              return std::string(c.oracle ? "true" : "false");
            }},
      RSAC_UINT_FIELD("oracle_max_states", oracle_max_states, std::size_t),
      RSAC_STRING_FIELD("output", output),
  };
  return table;
}

#undef RSAC_DOUBLE_FIELD
#undef RSAC_UINT_FIELD
#undef RSAC_STRING_FIELD

const Field& find_field(const std::string& key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw Error(ErrorCode::kConfig, "config field '" + key + "': unknown key");
}

[[noreturn]] void invalid(const char* key, const std::string& why) {
  throw Error(ErrorCode::kConfig, std::string("config field '") + key + "': " + why);
}

}  // namespace

const char* algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kRsacfa: return "rsacfa";
    case Algorithm::kTabular: return "tabular";
    case Algorithm::kAvgAc: return "avg_ac";
    case Algorithm::kDiscAc: return "disc_ac";
  }
  return "unknown";
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  find_field(key).set(*this, trim(value));
}

std::string ExperimentConfig::get(const std::string& key) const {
  return find_field(key).get(*this);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

void ExperimentConfig::validate() const {
  if (env != "gridworld" && env != "file") invalid("env", "must be gridworld or file");
  if (env == "file" && model_path.empty()) invalid("model_path", "required when env = file");
  if (env == "gridworld" && grid_side < 2) invalid("grid_side", "must be at least 2");
  if (!(slip_prob >= 0.0 && slip_prob <= 1.0)) invalid("slip_prob", "must lie in [0,1]");
  if (boundary != "wrap" && boundary != "clamp") invalid("boundary", "must be wrap or clamp");
  if (!(alpha > 0.0)) invalid("alpha", "must be positive");
  if (horizon == 0) invalid("horizon", "must be positive");
  if (window == 0) invalid("window", "must be positive");
  if (interval == 0) invalid("interval", "must be positive");
  if (!(schedules.a.scale > 0.0)) invalid("a0", "must be positive");
  if (!(schedules.b.scale > 0.0)) invalid("b0", "must be positive");
  if (!(schedules.c.scale > 0.0)) invalid("c0", "must be positive");
  if (!(schedules.a.exponent > 0.0)) invalid("a_exp", "must be positive");
  if (!(schedules.b.exponent > 0.0)) invalid("b_exp", "must be positive");
  if (!(schedules.c.exponent > 0.0)) invalid("c_exp", "must be positive");
  if (!(schedules.a.tau > 0.0)) invalid("tau", "must be positive");
  if (aggregation == 0) invalid("aggregation", "must be at least 1");
  if (policy_aggregation == 0) invalid("policy_aggregation", "must be at least 1");
  if (!(temperature > 0.0)) invalid("temperature", "must be positive");
  if (!(delta1 > 0.0)) invalid("delta1", "must be positive");
  if (!(delta2 > 0.0)) invalid("delta2", "must be positive");
  if (!(proj_bound > 0.0)) invalid("proj_bound", "must be positive");
  if (!(epsilon > 0.0)) invalid("epsilon", "must be positive");
  if (!(gamma > 0.0 && gamma < 1.0)) invalid("gamma", "must lie in (0,1)");
  if (output.empty()) invalid("output", "must not be empty");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kConfig,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    config.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config file " + path);
  return parse_config(in);
}

MdpModel load_model_file(const std::string& path, double alpha,
                         std::size_t ref_state) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model file " + path);
  json j;
  try {
    in >> j;
    const auto n_states = j.at("n_states").get<std::size_t>();
    const auto n_actions = j.at("n_actions").get<std::size_t>();
    auto trans = j.at("trans").get<std::vector<double>>();
    auto cost = j.at("cost").get<std::vector<double>>();
    if (trans.size() != n_states * n_actions * n_states || cost.size() != trans.size()) {
      throw Error(ErrorCode::kConfig, "model file " + path + ": tensor sizes do not match");
    }
    return MdpModel(n_states, n_actions, std::move(trans), std::move(cost), alpha,
                    ref_state);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, "model file " + path + ": " + e.what());
  }
}

MdpModel build_model(const ExperimentConfig& config) {
  config.validate();
  if (config.env == "file") {
    return load_model_file(config.model_path, config.alpha, config.ref_state);
  }
  const std::size_t n = config.grid_side * config.grid_side;
  if (config.ref_state >= n) invalid("ref_state", "out of range");
  if (config.start_state >= n) invalid("start_state", "out of range");
  GridConfig grid;
  grid.side = config.grid_side;
  grid.slip_prob = config.slip_prob;
  grid.boundary = config.boundary == "clamp" ? GridBoundary::kClamp : GridBoundary::kWrap;
  grid.fixed_cost_states = config.fixed_cost_states;
  return build_gridworld(grid, config.alpha, config.ref_state);
}

namespace {

std::vector<std::size_t> state_groups(const ExperimentConfig& config,
                                      std::size_t n_states, std::size_t block,
                                      std::size_t* n_groups) {
  if (config.env == "gridworld") {
    return grid_block_groups(config.grid_side, block, n_groups);
  }
  return contiguous_groups(n_states, block, n_groups);
}

std::size_t model_states(const ExperimentConfig& config) {
  if (config.env == "gridworld") return config.grid_side * config.grid_side;
  return build_model(config).num_states();
}

}  // namespace

FeatureMaps build_features(const ExperimentConfig& config) {
  const std::size_t n = model_states(config);
  std::size_t groups = 0;
  const auto g = state_groups(config, n, config.aggregation, &groups);
  FeatureMaps f;
  f.phi = aggregation_features(g, groups);
  f.psi = f.phi;
  return f;
}

SoftmaxPolicy build_policy(const ExperimentConfig& config) {
  std::size_t n_states = 0;
  std::size_t n_actions = kGridActions;
  if (config.env == "gridworld") {
    n_states = config.grid_side * config.grid_side;
  } else {
    const MdpModel model = build_model(config);
    n_states = model.num_states();
    n_actions = model.num_actions();
  }
  std::size_t groups = 0;
  const auto g = state_groups(config, n_states, config.policy_aggregation, &groups);
  return SoftmaxPolicy(n_states, n_actions,
                       one_hot_action_features(n_actions, g, groups),
                       config.temperature);
}

RsacfaParams rsacfa_params(const ExperimentConfig& config) {
  RsacfaParams p;
  p.delta1 = config.delta1;
  p.delta2 = config.delta2;
  p.proj_bound = config.proj_bound;
  p.epsilon = config.epsilon;
  p.schedules = config.schedules;
  return p;
}

// ---------------------------------------------------------------------------
// JSON helpers for checkpoints.

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(m(i, k));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || static_cast<std::size_t>(rows * cols) != data.size()) {
    throw Error(ErrorCode::kConfig, "checkpoint: matrix shape does not match its data");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = data[k++];
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json(const json& j) {
  const auto data = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(data.data(),
                                           static_cast<Eigen::Index>(data.size()));
}

json schedule_to_json(const PowerSchedule& s) {
  return json{{"scale", s.scale}, {"exponent", s.exponent}, {"tau", s.tau}};
}

PowerSchedule schedule_from_json(const json& j) {
  return {j.at("scale").get<double>(), j.at("exponent").get<double>(),
          j.at("tau").get<double>()};
}

json schedules_to_json(const Schedules& s) {
  return json{{"a", schedule_to_json(s.a)},
              {"b", schedule_to_json(s.b)},
              {"c", schedule_to_json(s.c)}};
}

Schedules schedules_from_json(const json& j) {
  return {schedule_from_json(j.at("a")), schedule_from_json(j.at("b")),
          schedule_from_json(j.at("c"))};
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint " + path);
  out << j.dump(1) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write checkpoint " + path);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open checkpoint " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, "checkpoint " + path + ": " + e.what());
  }
}

json rsacfa_checkpoint_json(const RsacfaCheckpoint& cp) {
  const RsacfaState& s = cp.state;
  return json{{"algorithm", "rsacfa"},
              {"n", s.n},
              {"r", vector_to_json(s.r)},
              {"a_mat", matrix_to_json(s.a_mat)},
              {"b_inv", matrix_to_json(s.b_inv)},
              {"u", matrix_to_json(s.u)},
              {"w_tilde", matrix_to_json(s.w_tilde)},
              {"theta", vector_to_json(s.theta)},
              {"delta1", s.delta1},
              {"delta2", s.delta2},
              {"proj_bound", s.proj_bound},
              {"epsilon", cp.epsilon},
              {"schedules", schedules_to_json(cp.schedules)},
              {"rng", cp.rng.serialize()},
              {"current_state", cp.current_state}};
}

}  // namespace

void save_rsacfa_checkpoint(const std::string& path, const RsacfaCheckpoint& cp) {
  write_json(path, rsacfa_checkpoint_json(cp));
}

RsacfaCheckpoint load_rsacfa_checkpoint(const std::string& path) {
  const json j = read_json(path);
  try {
    if (j.at("algorithm").get<std::string>() != "rsacfa") {
      throw Error(ErrorCode::kConfig, "checkpoint " + path + " is not an rsacfa checkpoint");
    }
    RsacfaCheckpoint cp;
    RsacfaState& s = cp.state;
    s.n = j.at("n").get<std::uint64_t>();
    s.r = vector_from_json(j.at("r"));
    s.a_mat = matrix_from_json(j.at("a_mat"));
    s.b_inv = matrix_from_json(j.at("b_inv"));
    s.u = matrix_from_json(j.at("u"));
    s.w_tilde = matrix_from_json(j.at("w_tilde"));
    s.theta = vector_from_json(j.at("theta"));
    s.delta1 = j.at("delta1").get<double>();
    s.delta2 = j.at("delta2").get<double>();
    s.proj_bound = j.at("proj_bound").get<double>();
    cp.epsilon = j.at("epsilon").get<double>();
    cp.schedules = schedules_from_json(j.at("schedules"));
    cp.rng = Rng::deserialize(j.at("rng").get<std::string>());
    cp.current_state = j.at("current_state").get<std::size_t>();
    return cp;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, "checkpoint " + path + ": " + e.what());
  }
}

Eigen::VectorXd load_checkpoint_theta(const std::string& path) {
  const json j = read_json(path);
  try {
    return vector_from_json(j.at("theta"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, "checkpoint " + path + ": " + e.what());
  }
}

double oracle_cost_from_checkpoint(const ExperimentConfig& config,
                                   const std::string& checkpoint_path) {
  const MdpModel model = build_model(config);
  SoftmaxPolicy policy = build_policy(config);
  const Eigen::VectorXd theta = load_checkpoint_theta(checkpoint_path);
  if (static_cast<std::size_t>(theta.size()) != policy.dim()) {
    throw Error(ErrorCode::kConfig,
                "checkpoint theta has dimension " + std::to_string(theta.size()) +
                    ", the configured policy expects " + std::to_string(policy.dim()));
  }
  policy.set_theta(theta);
  return risk_sensitive_cost(model, policy);
}

// ---------------------------------------------------------------------------
// Experiment driver.

namespace {

class Learner {
 public:
  virtual ~Learner() = default;
  virtual Transition step() = 0;
  virtual const SoftmaxPolicy& policy() const = 0;
  virtual json checkpoint() const = 0;
};

class RsacfaLearner final : public Learner {
 public:
  RsacfaLearner(const MdpModel& model, const SoftmaxPolicy& policy,
                FeatureMaps features, const ExperimentConfig& config)
      : impl_(model, policy, std::move(features), rsacfa_params(config), config.seed,
              config.start_state),
        epsilon_(config.epsilon) {}
  Transition step() override { return impl_.step(); }
  const SoftmaxPolicy& policy() const override { return impl_.policy(); }
  json checkpoint() const override {
    return rsacfa_checkpoint_json({impl_.state(), impl_.rng(), impl_.current_state(),
                                   impl_.params().schedules, epsilon_});
  }

 private:
  Rsacfa impl_;
  double epsilon_;
};

class TabularLearner final : public Learner {
 public:
  TabularLearner(const MdpModel& model, const SoftmaxPolicy& policy,
                 const ExperimentConfig& config)
      : impl_(model, policy, config.schedules, config.seed, config.start_state),
        schedules_(config.schedules) {}
  Transition step() override { return impl_.step(); }
  const SoftmaxPolicy& policy() const override { return impl_.policy(); }
  json checkpoint() const override {
    return json{{"algorithm", "tabular"},
                {"n", impl_.steps()},
                {"v", vector_to_json(impl_.critic().v)},
                {"critic_visits", impl_.critic().visits},
                {"w_tilde", matrix_to_json(impl_.grad().w_tilde)},
                {"grad_visits", impl_.grad().visits},
                {"theta", vector_to_json(impl_.policy().theta())},
                {"schedules", schedules_to_json(schedules_)},
                {"rng", impl_.rng().serialize()},
                {"current_state", impl_.current_state()}};
  }

 private:
  TabularRsac impl_;
  Schedules schedules_;
};

class BaselineWrapper final : public Learner {
 public:
  BaselineWrapper(const MdpModel& model, const SoftmaxPolicy& policy,
                  Eigen::MatrixXd phi, BaselineKind kind,
                  const ExperimentConfig& config)
      : impl_(model, policy, std::move(phi), kind, config.schedules, config.proj_bound,
              config.gamma, config.seed, config.start_state),
        schedules_(config.schedules),
        name_(kind == BaselineKind::kAverage ? "avg_ac" : "disc_ac") {}
  Transition step() override { return impl_.step(); }
  const SoftmaxPolicy& policy() const override { return impl_.policy(); }
  json checkpoint() const override {
    const BaselineState& s = impl_.state();
    return json{{"algorithm", name_},
                {"n", s.n},
                {"v_weights", vector_to_json(s.v_weights)},
                {"avg_cost_estimate", s.avg_cost_estimate},
                {"gamma", s.gamma},
                {"theta", vector_to_json(s.theta)},
                {"schedules", schedules_to_json(schedules_)},
                {"rng", impl_.rng().serialize()},
                {"current_state", impl_.current_state()}};
  }

 private:
  BaselineLearner impl_;
  Schedules schedules_;
  std::string name_;
};

std::unique_ptr<Learner> make_learner(const ExperimentConfig& config,
                                      const MdpModel& model) {
  const SoftmaxPolicy policy = build_policy(config);
  FeatureMaps features = build_features(config);
  switch (config.algorithm) {
    case Algorithm::kRsacfa:
      return std::make_unique<RsacfaLearner>(model, policy, std::move(features), config);
    case Algorithm::kTabular:
      return std::make_unique<TabularLearner>(model, policy, config);
    case Algorithm::kAvgAc:
      return std::make_unique<BaselineWrapper>(model, policy, std::move(features.phi),
                                               BaselineKind::kAverage, config);
    case Algorithm::kDiscAc:
      return std::make_unique<BaselineWrapper>(model, policy, std::move(features.phi),
                                               BaselineKind::kDiscounted, config);
  }
  throw Error(ErrorCode::kConfig, "config field 'algorithm': unsupported");
}

void write_row(std::ostream& out, const MetricRow& row) {
  out << row.step << ',' << format_double(row.mean) << ',' << format_double(row.std)
      << ',' << format_double(row.risk_cost);
  if (row.oracle_cost) out << ',' << format_double(*row.oracle_cost);
  char elapsed[32];
  std::snprintf(elapsed, sizeof(elapsed), "%.3f", row.elapsed_s);
  out << ',' << elapsed << '\n';
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config, std::ostream& csv,
                          const std::string& checkpoint_path) {
  config.validate();
  const MdpModel model = build_model(config);
  auto learner = make_learner(config, model);
  const bool with_oracle =
      config.oracle && model.num_states() <= config.oracle_max_states;

  csv << "# rsac metrics\n";
  csv << "# note = desk-scale run; the default horizon is 1e6 steps, far shorter "
         "than long-horizon studies\n";
  if (config.algorithm == Algorithm::kAvgAc || config.algorithm == Algorithm::kDiscAc) {
    csv << "# note = risk-neutral TD(0) actor-critic baseline\n";
  }
  for (const auto& [k, v] : config.entries()) csv << "# " << k << " = " << v << '\n';
  csv << "# num_states = " << model.num_states() << '\n';
  csv << "# num_actions = " << model.num_actions() << '\n';
  csv << "# theta_dim = " << learner->policy().dim() << '\n';
  csv << "step,mean,std,risk_cost";
  if (with_oracle) csv << ",oracle_cost";
  csv << ",elapsed_s\n";

  SlidingWindowStats stats(config.window);
  RunSummary summary;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t n = 1; n <= config.horizon; ++n) {
    const Transition tr = learner->step();
    stats.push(tr.cost);
    if (n % config.interval != 0 && n != config.horizon) continue;

    MetricRow row;
    row.step = n;
    row.mean = stats.mean();
    row.std = stats.stddev();
    row.risk_cost = stats.risk_cost(config.alpha);
    if (with_oracle) row.oracle_cost = risk_sensitive_cost(model, learner->policy());
    row.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!std::isfinite(row.mean) || !std::isfinite(row.std) ||
        !std::isfinite(row.risk_cost)) {
      throw Error(ErrorCode::kNumeric,
                  "non-finite window statistic at step " + std::to_string(n));
    }
    write_row(csv, row);
    summary.rows.push_back(row);
  }
  summary.last = summary.rows.back();

  const MetricRow& last = summary.last;
  csv << "# summary steps = " << last.step << ", window = " << stats.size()
      << ", mean = " << format_double(last.mean) << ", std = " << format_double(last.std)
      << ", risk_cost = " << format_double(last.risk_cost);
  if (last.oracle_cost) csv << ", oracle_cost = " << format_double(*last.oracle_cost);
  csv << '\n';
  csv.flush();
  if (!csv) throw Error(ErrorCode::kIo, "failed writing metrics stream");

  if (!checkpoint_path.empty()) write_json(checkpoint_path, learner->checkpoint());
  return summary;
}

RunSummary run_experiment_to_file(const ExperimentConfig& config,
                                  const std::string& csv_path,
                                  const std::string& checkpoint_path) {
  std::ofstream out(csv_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write metrics file " + csv_path);
  return run_experiment(config, out, checkpoint_path);
}

// ---------------------------------------------------------------------------
// Reading and merging metrics files.

std::optional<std::string> MetricsFile::provenance_value(const std::string& key) const {
  for (const auto& [k, v] : provenance) {
    if (k == key) return v;
  }
  return std::nullopt;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

MetricsFile read_metrics(std::istream& in) {
  MetricsFile file;
  std::vector<std::string> header;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("summary", 0) == 0) continue;
      // trim() eats the blank after '=' when the value is empty.
      const auto eq = body.find(" =");
      if (eq != std::string::npos) {
        file.provenance.emplace_back(trim(body.substr(0, eq)), trim(body.substr(eq + 2)));
      }
      continue;
    }
    if (header.empty()) {
      header = split_csv(line);
      const std::vector<std::string> base{"step", "mean", "std", "risk_cost"};
      if (header.size() < 5 || !std::equal(base.begin(), base.end(), header.begin()) ||
          header.back() != "elapsed_s") {
        throw Error(ErrorCode::kConfig, "metrics file: unexpected header '" + line + "'");
      }
      file.has_oracle = header.size() == 6 && header[4] == "oracle_cost";
      if (header.size() == 6 && !file.has_oracle) {
        throw Error(ErrorCode::kConfig, "metrics file: unexpected header '" + line + "'");
      }
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::kConfig, "metrics file: malformed row '" + line + "'");
    }
    MetricRow row;
    row.step = parse_u64("step", cells[0]);
    row.mean = parse_double("mean", cells[1]);
    row.std = parse_double("std", cells[2]);
    row.risk_cost = parse_double("risk_cost", cells[3]);
    if (file.has_oracle) row.oracle_cost = parse_double("oracle_cost", cells[4]);
    row.elapsed_s = parse_double("elapsed_s", cells.back());
    if (!file.rows.empty() && row.step <= file.rows.back().step) {
      throw Error(ErrorCode::kConfig, "metrics file: steps are not increasing");
    }
    file.rows.push_back(row);
  }
  if (header.empty()) throw Error(ErrorCode::kConfig, "metrics file: missing header");
  return file;
}

MetricsFile read_metrics_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open metrics file " + path);
  try {
    return read_metrics(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void compare_runs(const std::vector<MetricsFile>& runs,
                  const std::vector<std::string>& labels, std::ostream& out) {
  if (runs.empty()) throw Error(ErrorCode::kInvalidArgument, "compare: no inputs");
  if (labels.size() != runs.size()) {
    throw Error(ErrorCode::kInvalidArgument, "compare: one label per input required");
  }
  const auto& grid = runs.front().rows;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    const auto& rows = runs[k].rows;
    const bool same =
        rows.size() == grid.size() &&
        std::equal(rows.begin(), rows.end(), grid.begin(),
                   [](const MetricRow& x, const MetricRow& y) { return x.step == y.step; });
    if (!same) {
      throw Error(ErrorCode::kAlignment, "compare: step grid of '" + labels[k] +
                                             "' differs from '" + labels[0] + "'");
    }
  }

  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto algo = runs[k].provenance_value("algorithm");
    out << "# " << labels[k] << " = " << (algo ? *algo : "unknown") << '\n';
  }
  out << "step";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::string& l = labels[k];
    out << ',' << l << "_mean," << l << "_std," << l << "_risk_cost";
    if (runs[k].has_oracle) out << ',' << l << "_oracle_cost";
  }
  out << '\n';
  for (std::size_t r = 0; r < grid.size(); ++r) {
    out << grid[r].step;
    for (const auto& run : runs) {
      const MetricRow& row = run.rows[r];
      out << ',' << format_double(row.mean) << ',' << format_double(row.std) << ','
          << format_double(row.risk_cost);
      if (run.has_oracle) out << ',' << format_double(*row.oracle_cost);
    }
    out << '\n';
  }
}

void compare_run_files(const std::vector<std::string>& paths,
                       const std::string& out_path) {
  std::vector<MetricsFile> runs;
  std::vector<std::string> labels;
  std::set<std::string> used;
  for (const auto& p : paths) {
    runs.push_back(read_metrics_file(p));
    std::string base = std::filesystem::path(p).stem().string();
    if (base.empty()) base = "run";
    std::string label = base;
    for (int k = 2; used.count(label); ++k) label = base + "_" + std::to_string(k);
    used.insert(label);
    labels.push_back(label);
  }
  std::ostringstream buffer;
  compare_runs(runs, labels, buffer);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write comparison file " + out_path);
  out << buffer.str();
  if (!out) throw Error(ErrorCode::kIo, "failed writing comparison file " + out_path);
}

}  // namespace rsac
