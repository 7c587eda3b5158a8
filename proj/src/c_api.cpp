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

#include "rsac/rsac.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "rsac/error.hpp"
#include "rsac/harness.hpp"
#include "rsac/mdp.hpp"
#include "rsac/oracle.hpp"
#include "rsac/policy.hpp"

struct rsac_config {
  rsac::ExperimentConfig cfg;
};

struct rsac_model {
  rsac::MdpModel model;
  rsac::SoftmaxPolicy policy;
};

namespace {

thread_local std::string g_last_error;

rsac_status to_status(rsac::ErrorCode code) {
  switch (code) {
    case rsac::ErrorCode::kInvalidArgument: return RSAC_ERR_INVALID_ARGUMENT;
    case rsac::ErrorCode::kConfig: return RSAC_ERR_CONFIG;
    case rsac::ErrorCode::kIterationLimit: return RSAC_ERR_ITERATION_LIMIT;
    case rsac::ErrorCode::kReducible: return RSAC_ERR_REDUCIBLE;
    case rsac::ErrorCode::kFeatureDegenerate: return RSAC_ERR_FEATURE_DEGENERATE;
    case rsac::ErrorCode::kSingularMatrix: return RSAC_ERR_SINGULAR_MATRIX;
    case rsac::ErrorCode::kNumeric: return RSAC_ERR_NUMERIC;
    case rsac::ErrorCode::kIo: return RSAC_ERR_IO;
    case rsac::ErrorCode::kAlignment: return RSAC_ERR_ALIGNMENT;
  }
  return RSAC_ERR_INTERNAL;
}

rsac_status fail(rsac_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating every exception into a status code.
template <typename F>
rsac_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return RSAC_OK;
  } catch (const rsac::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RSAC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RSAC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RSAC_ERR_INTERNAL, "unknown error");
  }
}

#define RSAC_REQUIRE(cond, msg) \
  if (!(cond)) return fail(RSAC_ERR_INVALID_ARGUMENT, msg)

rsac::SoftmaxPolicy policy_at(const rsac_model& m, const double* theta, size_t dim) {
  if (dim != m.policy.dim()) {
    throw rsac::Error(rsac::ErrorCode::kInvalidArgument,
                      "theta has dimension " + std::to_string(dim) + ", expected " +
                          std::to_string(m.policy.dim()));
  }
  return m.policy.with_theta(
      Eigen::Map<const Eigen::VectorXd>(theta, static_cast<Eigen::Index>(dim)));
}

}  // namespace

extern "C" {

const char* rsac_version(void) { return "1.0.0"; }

const char* rsac_status_string(rsac_status status) {
  switch (status) {
    case RSAC_OK: return "ok";
    case RSAC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RSAC_ERR_CONFIG: return "configuration error";
    case RSAC_ERR_ITERATION_LIMIT: return "iteration limit reached";
    case RSAC_ERR_REDUCIBLE: return "reducible chain";
    case RSAC_ERR_FEATURE_DEGENERATE: return "degenerate features";
    case RSAC_ERR_SINGULAR_MATRIX: return "singular matrix";
    case RSAC_ERR_NUMERIC: return "non-finite iterate";
    case RSAC_ERR_IO: return "i/o error";
    case RSAC_ERR_ALIGNMENT: return "step grids differ";
    case RSAC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case RSAC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rsac_last_error_message(void) { return g_last_error.c_str(); }

rsac_status rsac_config_create(rsac_config** out) {
  RSAC_REQUIRE(out, "out is null");
  return guarded([&] { *out = new rsac_config(); });
}

rsac_status rsac_config_load(const char* path, rsac_config** out) {
  RSAC_REQUIRE(path && out, "path or out is null");
  return guarded([&] {
    auto c = std::make_unique<rsac_config>();
    c->cfg = rsac::load_config(path);
    *out = c.release();
  });
}

rsac_status rsac_config_set(rsac_config* config, const char* key, const char* value) {
  RSAC_REQUIRE(config && key && value, "config, key or value is null");
  return guarded([&] { config->cfg.set(key, value); });
}

rsac_status rsac_config_get(const rsac_config* config, const char* key, char* buf,
                            size_t buf_size, size_t* needed) {
  RSAC_REQUIRE(config && key, "config or key is null");
  std::string value;
  const rsac_status st = guarded([&] { value = config->cfg.get(key); });
  if (st != RSAC_OK) return st;
  if (needed) *needed = value.size() + 1;
  if (!buf || buf_size < value.size() + 1) {
    return fail(RSAC_ERR_BUFFER_TOO_SMALL, "buffer too small for value of " +
                                               std::string(key));
  }
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return RSAC_OK;
}

rsac_status rsac_config_validate(const rsac_config* config) {
  RSAC_REQUIRE(config, "config is null");
  return guarded([&] { config->cfg.validate(); });
}

void rsac_config_destroy(rsac_config* config) { delete config; }

rsac_status rsac_run(const rsac_config* config, const char* csv_path,
                     const char* checkpoint_path, rsac_run_summary* summary) {
  RSAC_REQUIRE(config, "config is null");
  return guarded([&] {
    const std::string out = csv_path ? csv_path : config->cfg.output;
    const rsac::RunSummary s = rsac::run_experiment_to_file(
        config->cfg, out, checkpoint_path ? checkpoint_path : "");
    if (summary) {
      summary->steps = s.last.step;
      summary->mean = s.last.mean;
      summary->std = s.last.std;
      summary->risk_cost = s.last.risk_cost;
      summary->oracle_cost =
          s.last.oracle_cost.value_or(std::numeric_limits<double>::quiet_NaN());
      summary->elapsed_s = s.last.elapsed_s;
    }
  });
}

rsac_status rsac_compare(const char* const* paths, size_t n_paths, const char* out_path) {
  RSAC_REQUIRE(paths && n_paths > 0 && out_path, "paths or out_path is null");
  return guarded([&] {
    std::vector<std::string> files;
    for (size_t k = 0; k < n_paths; ++k) {
      if (!paths[k]) {
        throw rsac::Error(rsac::ErrorCode::kInvalidArgument, "null input path");
      }
      files.emplace_back(paths[k]);
    }
    rsac::compare_run_files(files, out_path);
  });
}

rsac_status rsac_oracle_cost(const rsac_config* config, const char* checkpoint_path,
                             double* out) {
  RSAC_REQUIRE(config && checkpoint_path && out, "null argument");
  return guarded(
      [&] { *out = rsac::oracle_cost_from_checkpoint(config->cfg, checkpoint_path); });
}

rsac_status rsac_model_create(const rsac_config* config, rsac_model** out) {
  RSAC_REQUIRE(config && out, "config or out is null");
  return guarded([&] {
    *out = new rsac_model{rsac::build_model(config->cfg), rsac::build_policy(config->cfg)};
  });
}

size_t rsac_model_num_states(const rsac_model* model) {
  return model ? model->model.num_states() : 0;
}

size_t rsac_model_num_actions(const rsac_model* model) {
  return model ? model->model.num_actions() : 0;
}

size_t rsac_model_theta_dim(const rsac_model* model) {
  return model ? model->policy.dim() : 0;
}

rsac_status rsac_model_risk_cost(const rsac_model* model, const double* theta,
                                 size_t dim, double* out) {
  RSAC_REQUIRE(model && theta && out, "null argument");
  return guarded([&] {
    *out = rsac::risk_sensitive_cost(model->model, policy_at(*model, theta, dim));
  });
}

rsac_status rsac_model_average_cost(const rsac_model* model, const double* theta,
                                    size_t dim, double* out) {
  RSAC_REQUIRE(model && theta && out, "null argument");
  return guarded([&] {
    *out = rsac::average_cost(model->model, policy_at(*model, theta, dim));
  });
}

rsac_status rsac_model_policy_gradient(const rsac_model* model, const double* theta,
                                       size_t dim, double* grad_out) {
  RSAC_REQUIRE(model && theta && grad_out, "null argument");
  return guarded([&] {
    const Eigen::VectorXd g =
        rsac::exact_policy_gradient(model->model, policy_at(*model, theta, dim));
    std::memcpy(grad_out, g.data(), dim * sizeof(double));
  });
}

void rsac_model_destroy(rsac_model* model) { delete model; }

}  // extern "C"
