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

// Command-line front end over the C interface.
//
//   rsac_cli run --config FILE [--seed S] [--out PATH] [--checkpoint PATH] [--set k=v]...
//   rsac_cli compare --out PATH FILE...
//   rsac_cli oracle --config FILE --theta CHECKPOINT
//
// Exit status: 0 success, 1 usage or configuration error, 2 non-finite
// iterate, 3 any other failure.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsac/rsac.h"

namespace {

int exit_code(rsac_status st) {
  switch (st) {
    case RSAC_OK: return 0;
    case RSAC_ERR_CONFIG:
    case RSAC_ERR_INVALID_ARGUMENT: return 1;
    case RSAC_ERR_NUMERIC: return 2;
    default: return 3;
  }
}

int report(rsac_status st) {
  if (st != RSAC_OK) {
    std::fprintf(stderr, "rsac: %s: %s\n", rsac_status_string(st),
                 rsac_last_error_message());
  }
  return exit_code(st);
}

struct ConfigHandle {
  rsac_config* ptr = nullptr;
  ~ConfigHandle() { rsac_config_destroy(ptr); }
};

int cmd_run(const std::string& config_path, const std::string& seed,
            const std::string& out, const std::string& checkpoint,
            const std::vector<std::string>& overrides) {
  ConfigHandle cfg;
  rsac_status st = rsac_config_load(config_path.c_str(), &cfg.ptr);
  if (st != RSAC_OK) return report(st);
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "rsac: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    st = rsac_config_set(cfg.ptr, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != RSAC_OK) return report(st);
  }
  if (!seed.empty()) {
    st = rsac_config_set(cfg.ptr, "seed", seed.c_str());
    if (st != RSAC_OK) return report(st);
  }
  if (!out.empty()) {
    st = rsac_config_set(cfg.ptr, "output", out.c_str());
    if (st != RSAC_OK) return report(st);
  }
  st = rsac_config_validate(cfg.ptr);
  if (st != RSAC_OK) return report(st);

  rsac_run_summary summary{};
  st = rsac_run(cfg.ptr, nullptr, checkpoint.empty() ? nullptr : checkpoint.c_str(),
                &summary);
  if (st != RSAC_OK) return report(st);
  std::printf("steps=%llu mean=%.17g std=%.17g risk_cost=%.17g",
              static_cast<unsigned long long>(summary.steps), summary.mean,
              summary.std, summary.risk_cost);
  if (summary.oracle_cost == summary.oracle_cost) {
    std::printf(" oracle_cost=%.17g", summary.oracle_cost);
  }
  std::printf(" elapsed_s=%.3f\n", summary.elapsed_s);
  return 0;
}

int cmd_compare(const std::string& out, const std::vector<std::string>& files) {
  std::vector<const char*> paths;
  for (const auto& f : files) paths.push_back(f.c_str());
  return report(rsac_compare(paths.data(), paths.size(), out.c_str()));
}

int cmd_oracle(const std::string& config_path, const std::string& checkpoint) {
  ConfigHandle cfg;
  rsac_status st = rsac_config_load(config_path.c_str(), &cfg.ptr);
  if (st != RSAC_OK) return report(st);
  double cost = 0.0;
  st = rsac_oracle_cost(cfg.ptr, checkpoint.c_str(), &cost);
  if (st != RSAC_OK) return report(st);
  std::printf("%.17g\n", cost);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-sensitive actor-critic experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rsac_version());

  std::string config_path, seed, out, checkpoint, theta_path;
  std::vector<std::string> overrides, files;

  auto* run = app.add_subcommand("run", "Run one experiment and write its metrics CSV");
  run->add_option("--config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("--out", out, "Override the output CSV path");
  run->add_option("--checkpoint", checkpoint, "Write the final learner state here");
  run->add_option("--set", overrides, "Override any key, as key=value");

  auto* compare = app.add_subcommand("compare", "Merge metrics files on their step grid");
  compare->add_option("--out", out, "Output CSV")->required();
  compare->add_option("files", files, "Metrics files")->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "Exact log(lambda) of a checkpointed policy");
  oracle->add_option("--config", config_path, "Experiment file")->required()->check(CLI::ExistingFile);
  oracle->add_option("--theta", theta_path, "Checkpoint")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) return cmd_run(config_path, seed, out, checkpoint, overrides);
  if (*compare) return cmd_compare(out, files);
  return cmd_oracle(config_path, theta_path);
}
