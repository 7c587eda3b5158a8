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

#ifndef RSAC_RSAC_H_
#define RSAC_RSAC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RSAC_API __declspec(dllexport)
#else
#define RSAC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every function returns RSAC_OK on success. On failure a description of
 * the most recent error on the calling thread is available from
 * rsac_last_error_message(). */
typedef enum rsac_status {
  RSAC_OK = 0,
  RSAC_ERR_INVALID_ARGUMENT = 1,
  RSAC_ERR_CONFIG = 2,
  RSAC_ERR_ITERATION_LIMIT = 3,
  RSAC_ERR_REDUCIBLE = 4,
  RSAC_ERR_FEATURE_DEGENERATE = 5,
  RSAC_ERR_SINGULAR_MATRIX = 6,
  RSAC_ERR_NUMERIC = 7,
  RSAC_ERR_IO = 8,
  RSAC_ERR_ALIGNMENT = 9,
  RSAC_ERR_BUFFER_TOO_SMALL = 10,
  RSAC_ERR_INTERNAL = 99
} rsac_status;

typedef struct rsac_config rsac_config;
typedef struct rsac_model rsac_model;

typedef struct rsac_run_summary {
  uint64_t steps;
  double mean;
  double std;
  double risk_cost;
  double oracle_cost; /* NaN when the oracle was not evaluated */
  double elapsed_s;
} rsac_run_summary;

RSAC_API const char* rsac_version(void);
RSAC_API const char* rsac_status_string(rsac_status status);
RSAC_API const char* rsac_last_error_message(void);

/* Experiment configuration: every key has a default. */
RSAC_API rsac_status rsac_config_create(rsac_config** out);
RSAC_API rsac_status rsac_config_load(const char* path, rsac_config** out);
RSAC_API rsac_status rsac_config_set(rsac_config* config, const char* key,
                                     const char* value);
/* Writes the NUL-terminated value into buf. If buf_size is too small,
 * *needed (when non-NULL) receives the required size including the NUL. */
RSAC_API rsac_status rsac_config_get(const rsac_config* config, const char* key,
                                     char* buf, size_t buf_size, size_t* needed);
RSAC_API rsac_status rsac_config_validate(const rsac_config* config);
RSAC_API void rsac_config_destroy(rsac_config* config);

/* Runs the experiment, writing metrics to csv_path (NULL: the config's
 * output key). checkpoint_path may be NULL. summary may be NULL. */
RSAC_API rsac_status rsac_run(const rsac_config* config, const char* csv_path,
                              const char* checkpoint_path,
                              rsac_run_summary* summary);

/* Merges metrics files sharing a step grid into out_path. */
RSAC_API rsac_status rsac_compare(const char* const* paths, size_t n_paths,
                                  const char* out_path);

/* log(lambda) of the configured model under a checkpoint's policy. */
RSAC_API rsac_status rsac_oracle_cost(const rsac_config* config,
                                      const char* checkpoint_path, double* out);

/* Exact evaluation of a configured model and policy family. */
RSAC_API rsac_status rsac_model_create(const rsac_config* config, rsac_model** out);
RSAC_API size_t rsac_model_num_states(const rsac_model* model);
RSAC_API size_t rsac_model_num_actions(const rsac_model* model);
RSAC_API size_t rsac_model_theta_dim(const rsac_model* model);
RSAC_API rsac_status rsac_model_risk_cost(const rsac_model* model,
                                          const double* theta, size_t dim,
                                          double* out);
RSAC_API rsac_status rsac_model_average_cost(const rsac_model* model,
                                             const double* theta, size_t dim,
                                             double* out);
/* grad_out must hold dim doubles. */
RSAC_API rsac_status rsac_model_policy_gradient(const rsac_model* model,
                                                const double* theta, size_t dim,
                                                double* grad_out);
RSAC_API void rsac_model_destroy(rsac_model* model);

#ifdef __cplusplus
}
#endif

#endif /* RSAC_RSAC_H_ */
