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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rsac/harness.hpp"
#include "rsac/oracle.hpp"
#include "rsac/rsac.h"

namespace {

namespace fs = std::filesystem;

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("rsac_capi_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ASSERT_EQ(rsac_config_create(&cfg_), RSAC_OK);
  }
  void TearDown() override {
    rsac_config_destroy(cfg_);
    fs::remove_all(dir_);
  }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  void small_run() {
    ASSERT_EQ(rsac_config_set(cfg_, "horizon", "20000"), RSAC_OK);
    ASSERT_EQ(rsac_config_set(cfg_, "window", "1000"), RSAC_OK);
    ASSERT_EQ(rsac_config_set(cfg_, "interval", "5000"), RSAC_OK);
  }

  fs::path dir_;
  rsac_config* cfg_ = nullptr;
};

TEST_F(CApi, ConfigSetGetAndBufferSize) {
  ASSERT_EQ(rsac_config_set(cfg_, "alpha", "0.25"), RSAC_OK);
  char buf[64];
  size_t needed = 0;
  ASSERT_EQ(rsac_config_get(cfg_, "alpha", buf, sizeof buf, &needed), RSAC_OK);
  EXPECT_STREQ(buf, "0.25");

  char tiny[3];
  ASSERT_EQ(rsac_config_get(cfg_, "algorithm", tiny, sizeof tiny, &needed),
            RSAC_ERR_BUFFER_TOO_SMALL);
  EXPECT_EQ(needed, std::string("rsacfa").size() + 1);
  std::vector<char> fit(needed);
  EXPECT_EQ(rsac_config_get(cfg_, "algorithm", fit.data(), fit.size(), nullptr), RSAC_OK);
  EXPECT_STREQ(fit.data(), "rsacfa");
}

TEST_F(CApi, ErrorsCarryCodesAndMessages) {
  EXPECT_EQ(rsac_config_set(cfg_, "colour", "blue"), RSAC_ERR_CONFIG);
  EXPECT_NE(std::string(rsac_last_error_message()).find("colour"), std::string::npos);
  EXPECT_EQ(rsac_config_set(cfg_, "alpha", "-2"), RSAC_OK);
  EXPECT_EQ(rsac_config_validate(cfg_), RSAC_ERR_CONFIG);
  EXPECT_NE(std::string(rsac_last_error_message()).find("alpha"), std::string::npos);
  EXPECT_EQ(rsac_config_create(nullptr), RSAC_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(rsac_config_set(nullptr, "alpha", "1"), RSAC_ERR_INVALID_ARGUMENT);
  rsac_config* none = nullptr;
  EXPECT_EQ(rsac_config_load(file("missing.cfg").c_str(), &none), RSAC_ERR_IO);
  EXPECT_EQ(none, nullptr);
}

TEST_F(CApi, StatusStringsAreDistinct) {
  EXPECT_STREQ(rsac_status_string(RSAC_OK), "ok");
  EXPECT_STRNE(rsac_status_string(RSAC_ERR_CONFIG), rsac_status_string(RSAC_ERR_NUMERIC));
  EXPECT_NE(std::string(rsac_version()), "");
}

TEST_F(CApi, RunMatchesCoreAndWritesFiles) {
  small_run();
  rsac_run_summary s{};
  const std::string csv = file("run.csv"), cp = file("cp.json");
  ASSERT_EQ(rsac_run(cfg_, csv.c_str(), cp.c_str(), &s), RSAC_OK) << rsac_last_error_message();
  EXPECT_EQ(s.steps, 20000u);
  EXPECT_TRUE(fs::exists(csv));

  rsac::ExperimentConfig c;
  c.horizon = 20000;
  c.window = 1000;
  c.interval = 5000;
  std::ostringstream ignored;
  const rsac::RunSummary core = rsac::run_experiment(c, ignored);
  EXPECT_EQ(s.mean, core.last.mean);
  EXPECT_EQ(s.std, core.last.std);
  EXPECT_EQ(s.risk_cost, core.last.risk_cost);
  EXPECT_EQ(s.oracle_cost, *core.last.oracle_cost);

  double oc = 0.0;
  ASSERT_EQ(rsac_oracle_cost(cfg_, cp.c_str(), &oc), RSAC_OK);
  EXPECT_DOUBLE_EQ(oc, s.oracle_cost);

  const char* paths[] = {csv.c_str(), csv.c_str()};
  EXPECT_EQ(rsac_compare(paths, 2, file("cmp.csv").c_str()), RSAC_OK);
  EXPECT_TRUE(fs::exists(file("cmp.csv")));
}

TEST_F(CApi, OracleIsNanWhenSkipped) {
  small_run();
  ASSERT_EQ(rsac_config_set(cfg_, "oracle", "false"), RSAC_OK);
  rsac_run_summary s{};
  ASSERT_EQ(rsac_run(cfg_, file("run.csv").c_str(), nullptr, &s), RSAC_OK);
  EXPECT_TRUE(std::isnan(s.oracle_cost));
}

TEST_F(CApi, NumericBlowUpIsReported) {
  small_run();
  ASSERT_EQ(rsac_config_set(cfg_, "alpha", "1000"), RSAC_OK);
  EXPECT_EQ(rsac_run(cfg_, file("run.csv").c_str(), nullptr, nullptr), RSAC_ERR_NUMERIC);
  EXPECT_NE(std::string(rsac_last_error_message()).find("step"), std::string::npos);
}

TEST_F(CApi, ModelFunctionsMatchCore) {
  ASSERT_EQ(rsac_config_set(cfg_, "alpha", "0.5"), RSAC_OK);
  rsac_model* model = nullptr;
  ASSERT_EQ(rsac_model_create(cfg_, &model), RSAC_OK);
  EXPECT_EQ(rsac_model_num_states(model), 9u);
  EXPECT_EQ(rsac_model_num_actions(model), 9u);
  const size_t dim = rsac_model_theta_dim(model);
  ASSERT_EQ(dim, 81u);

  std::vector<double> theta(dim);
  for (size_t k = 0; k < dim; ++k) theta[k] = std::sin(0.37 * static_cast<double>(k));
  rsac::ExperimentConfig c;
  c.alpha = 0.5;
  const rsac::MdpModel m = rsac::build_model(c);
  rsac::SoftmaxPolicy p = rsac::build_policy(c);
  p.set_theta(Eigen::Map<const Eigen::VectorXd>(theta.data(), static_cast<Eigen::Index>(dim)));

  double risk = 0.0, avg = 0.0;
  ASSERT_EQ(rsac_model_risk_cost(model, theta.data(), dim, &risk), RSAC_OK);
  ASSERT_EQ(rsac_model_average_cost(model, theta.data(), dim, &avg), RSAC_OK);
  EXPECT_EQ(risk, rsac::risk_sensitive_cost(m, p));
  EXPECT_EQ(avg, rsac::average_cost(m, p));

  std::vector<double> grad(dim);
  ASSERT_EQ(rsac_model_policy_gradient(model, theta.data(), dim, grad.data()), RSAC_OK);
  const Eigen::VectorXd g = rsac::exact_policy_gradient(m, p);
  for (size_t k = 0; k < dim; ++k) EXPECT_EQ(grad[k], g(static_cast<Eigen::Index>(k)));

  EXPECT_EQ(rsac_model_risk_cost(model, theta.data(), dim - 1, &risk), RSAC_ERR_INVALID_ARGUMENT);
  rsac_model_destroy(model);
}

// The command-line front end maps error classes to exit codes.
class Cli : public CApi {
 protected:
  int run(const std::string& args) {
    const std::string cmd = std::string(RSAC_CLI_PATH) + " " + args + " > " +
                            file("stdout.txt") + " 2> " + file("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string write_config(const std::string& body) {
    const std::string path = file("exp.cfg");
    std::ofstream(path) << body;
    return path;
  }
};

TEST_F(Cli, SuccessfulRunExitsZero) {
  const std::string cfg = write_config("horizon = 2000\nwindow = 100\ninterval = 1000\n");
  EXPECT_EQ(run("run --config " + cfg + " --out " + file("m.csv") + " --checkpoint " +
                file("cp.json")),
            0);
  EXPECT_TRUE(fs::exists(file("m.csv")));
  EXPECT_EQ(run("oracle --config " + cfg + " --theta " + file("cp.json")), 0);
  EXPECT_EQ(run("compare --out " + file("c.csv") + " " + file("m.csv")), 0);
}

TEST_F(Cli, ConfigErrorExitsOne) {
  EXPECT_EQ(run("run --config " + write_config("alpha = -1\n")), 1);
  EXPECT_EQ(run("run --config " + write_config("horizon = 10\n") + " --set colour=blue"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
}

TEST_F(Cli, NumericFailureExitsTwo) {
  const std::string cfg = write_config("alpha = 1000\nhorizon = 2000\nwindow = 100\n");
  EXPECT_EQ(run("run --config " + cfg + " --out " + file("m.csv")), 2);
}

}  // namespace
