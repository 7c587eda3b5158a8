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
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rsac/error.hpp"
#include "rsac/gridworld.hpp"
#include "rsac/oracle.hpp"

namespace rsac {
namespace {

using testing::ix;

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments cost_moments(const MdpModel& m, std::size_t i, std::size_t a) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < m.num_states(); ++j) {
    m1 += m.p(i, a, j) * m.c(i, a, j);
    m2 += m.p(i, a, j) * m.c(i, a, j) * m.c(i, a, j);
  }
  return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

// Breadth-first closure over the union of action supports.
bool irreducible(const MdpModel& m) {
  const std::size_t n = m.num_states();
  for (std::size_t start = 0; start < n; ++start) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> frontier{start};
    seen[start] = true;
    while (!frontier.empty()) {
      const std::size_t i = frontier.back();
      frontier.pop_back();
      for (std::size_t a = 0; a < m.num_actions(); ++a)
        for (std::size_t j = 0; j < n; ++j)
          if (m.p(i, a, j) > 0 && !seen[j]) {
            seen[j] = true;
            frontier.push_back(j);
          }
    }
    for (bool s : seen)
      if (!s) return false;
  }
  return true;
}

TEST(Gridworld, TwoByTwoConstruction) {
  GridConfig cfg;
  cfg.side = 2;
  for (GridBoundary b : {GridBoundary::kWrap, GridBoundary::kClamp}) {
    cfg.boundary = b;
    const MdpModel m = build_gridworld(cfg, 1.0);
    EXPECT_EQ(m.num_states(), 4u);
    EXPECT_EQ(m.num_actions(), 9u);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t a = 0; a < 9; ++a) {
        double sum = 0.0;
        for (double p : m.trans_row(i, a)) sum += p;
        EXPECT_NEAR(sum, 1.0, 1e-12);
      }
  }
}

TEST(Gridworld, SideOneIsRejected) {
  GridConfig cfg;
  cfg.side = 1;
  EXPECT_THROW(build_gridworld(cfg, 1.0), Error);
}

TEST(Gridworld, InvalidFixedCostStateIsConfigError) {
  GridConfig cfg;
  cfg.fixed_cost_states = {9};
  try {
    build_gridworld(cfg, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("fixed_cost_states"), std::string::npos);
  }
}

TEST(Gridworld, ParityCostMoments) {
  for (std::size_t side : {3u, 5u, 10u}) {
    GridConfig cfg;
    cfg.side = side;
    const MdpModel m = build_gridworld(cfg, 1.0);
    const std::vector<std::size_t> corners = corner_states(side);
    for (std::size_t i = 0; i < m.num_states(); ++i) {
      const bool fixed = std::find(corners.begin(), corners.end(), i) != corners.end();
      for (std::size_t a = 0; a < 9; ++a) {
        const Moments mo = cost_moments(m, i, a);
        if (fixed) {
          EXPECT_DOUBLE_EQ(mo.mean, 10.0);
          EXPECT_NEAR(mo.std, 0.0, 1e-7);
        } else if (a % 2 == 0) {
          EXPECT_NEAR(mo.mean, 7.0, 1e-12);
          EXPECT_NEAR(mo.std, 1.0, 1e-12);
        } else {
          EXPECT_NEAR(mo.mean, 5.0, 1e-12);
          EXPECT_NEAR(mo.std, 4.0, 1e-12);
        }
      }
    }
  }
}

TEST(Gridworld, SlipSplitsUniformlyOverOtherMoves) {
  const MdpModel m = build_gridworld(GridConfig{}, 1.0);
  const std::size_t centre = grid_state(3, 1, 1);
  for (std::size_t a = 0; a < 9; ++a) {
    const std::size_t target = grid_state(3, static_cast<std::size_t>(1 + kGridMoves[a][0]),
                                          static_cast<std::size_t>(1 + kGridMoves[a][1]));
    for (std::size_t j = 0; j < 9; ++j) {
      EXPECT_NEAR(m.p(centre, a, j), j == target ? 0.5 : 0.5 / 8.0, 1e-15);
    }
  }
  // Action 0 is left, action 3 is down.
  EXPECT_NEAR(m.p(centre, 0, grid_state(3, 1, 0)), 0.5, 1e-15);
  EXPECT_NEAR(m.p(centre, 3, grid_state(3, 2, 1)), 0.5, 1e-15);
}

TEST(Gridworld, ClampTurnsOffGridMovesIntoStayMismatch) {
  GridConfig cfg;
  cfg.boundary = GridBoundary::kClamp;
  cfg.fixed_cost_states = {4};
  const MdpModel m = build_gridworld(cfg, 1.0);
  // From the top-left corner, left (0), up (2), up-left (4), up-right (5)
  // and down-left (6) all clamp to staying put.
  const std::size_t corner = 0;
  EXPECT_NEAR(m.p(corner, 0, corner), 0.5 + 5.0 * 0.5 / 8.0, 1e-15);
  EXPECT_EQ(m.c(corner, 0, corner), 8.0);   // even action, never realised
  EXPECT_EQ(m.c(corner, 8, corner), 6.0);   // stay realised
  EXPECT_EQ(m.c(corner, 1, 1), 1.0);        // right realised
  EXPECT_EQ(m.c(corner, 1, corner), 9.0);
  EXPECT_EQ(m.c(4, 3, 0), 10.0);
  EXPECT_TRUE(irreducible(m));
}

TEST(Gridworld, IrreducibleForEverySideAndBoundary) {
  for (std::size_t side : {2u, 3u, 4u, 7u}) {
    for (GridBoundary b : {GridBoundary::kWrap, GridBoundary::kClamp}) {
      GridConfig cfg;
      cfg.side = side;
      cfg.boundary = b;
      EXPECT_TRUE(irreducible(build_gridworld(cfg, 1.0))) << side;
    }
  }
}

TEST(Gridworld, OracleAverageCostMatchesMonteCarlo) {
  const MdpModel m = build_gridworld(GridConfig{}, 1.0);
  const SoftmaxPolicy p = tabular_softmax(9, 9);
  const double exact = average_cost(m, p);
  EXPECT_NEAR(exact, testing::oracle_average_cost(m, p), 1e-12);
  const Trajectory t = simulate(m, p, 0, 1000000, 8);
  double total = 0.0;
  for (double c : t.costs) total += c;
  EXPECT_LT(std::abs(total / 1e6 - exact) / exact, 0.01);
}

TEST(Gridworld, BlockGroups) {
  std::size_t groups = 0;
  const std::vector<std::size_t> g = grid_block_groups(4, 2, &groups);
  EXPECT_EQ(groups, 4u);
  EXPECT_EQ(g, (std::vector<std::size_t>{0, 0, 1, 1, 0, 0, 1, 1, 2, 2, 3, 3, 2, 2, 3, 3}));
  grid_block_groups(3, 2, &groups);
  EXPECT_EQ(groups, 4u);
}

}  // namespace
}  // namespace rsac
