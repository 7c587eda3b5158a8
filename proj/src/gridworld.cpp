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

#include "rsac/gridworld.hpp"

#include <algorithm>

#include "rsac/error.hpp"

namespace rsac {
namespace {

struct Cell {
  long row;
  long col;
};

// Target cell of `move` from `from`, and whether the move stayed on-grid.
Cell apply_move(const GridConfig& cfg, Cell from, std::size_t move) {
  const long side = static_cast<long>(cfg.side);
  long r = from.row + kGridMoves[move][0];
  long c = from.col + kGridMoves[move][1];
  if (cfg.boundary == GridBoundary::kWrap) {
    r = (r + side) % side;
    c = (c + side) % side;
  } else if (r < 0 || r >= side || c < 0 || c >= side) {
    return from;
  }
  return {r, c};
}

}  // namespace

std::vector<std::size_t> corner_states(std::size_t side) {
  return {grid_state(side, 0, 0), grid_state(side, 0, side - 1),
          grid_state(side, side - 1, 0), grid_state(side, side - 1, side - 1)};
}

MdpModel build_gridworld(const GridConfig& cfg, double alpha,
                         std::size_t ref_state) {
  if (cfg.side < 2) {
    throw Error(ErrorCode::kConfig, "gridworld: side must be at least 2");
  }
  if (!(cfg.slip_prob >= 0.0 && cfg.slip_prob <= 1.0)) {
    throw Error(ErrorCode::kConfig, "gridworld: slip_prob must lie in [0,1]");
  }
  for (double c : {cfg.fixed_cost, cfg.even_match, cfg.even_mismatch,
                   cfg.odd_match, cfg.odd_mismatch}) {
    if (!(c > 0.0)) {
      throw Error(ErrorCode::kConfig, "gridworld: costs must be positive");
    }
  }
  const std::size_t side = cfg.side;
  const std::size_t n = side * side;
  std::vector<bool> fixed(n, false);
  const std::vector<std::size_t> fixed_states =
      cfg.fixed_cost_states.empty() ? corner_states(side) : cfg.fixed_cost_states;
  for (std::size_t s : fixed_states) {
    if (s >= n) {
      throw Error(ErrorCode::kConfig,
                  "gridworld: fixed_cost_states entry " + std::to_string(s) +
                      " is not a state of a " + std::to_string(side) + "x" +
                      std::to_string(side) + " grid");
    }
    fixed[s] = true;
  }

  const std::size_t na = kGridActions;
  std::vector<double> trans(n * na * n, 0.0);
  std::vector<double> cost(n * na * n, 0.0);
  const double slip_each = cfg.slip_prob / static_cast<double>(na - 1);

  for (std::size_t i = 0; i < n; ++i) {
    const Cell from{static_cast<long>(i / side), static_cast<long>(i % side)};
    for (std::size_t a = 0; a < na; ++a) {
      double* prow = &trans[(i * na + a) * n];
      double* crow = &cost[(i * na + a) * n];
      for (std::size_t m = 0; m < na; ++m) {
        const Cell to = apply_move(cfg, from, m);
        const std::size_t j =
            grid_state(side, static_cast<std::size_t>(to.row),
                       static_cast<std::size_t>(to.col));
        prow[j] += (m == a) ? 1.0 - cfg.slip_prob : slip_each;
      }

      const Cell target = apply_move(cfg, from, a);
      const bool even = (a % 2 == 0);
      for (std::size_t j = 0; j < n; ++j) {
        if (fixed[i]) {
          crow[j] = cfg.fixed_cost;
          continue;
        }
        const Cell to{static_cast<long>(j / side), static_cast<long>(j % side)};
        bool match;
        if (cfg.boundary == GridBoundary::kWrap) {
          match = to.row == target.row && to.col == target.col;
        } else {
          // Realised displacement must equal the intended one; a clamped
          // off-grid attempt (displacement 0) is a mismatch unless a is stay.
          match = to.row - from.row == kGridMoves[a][0] &&
                  to.col - from.col == kGridMoves[a][1];
        }
        if (even) {
          crow[j] = match ? cfg.even_match : cfg.even_mismatch;
        } else {
          crow[j] = match ? cfg.odd_match : cfg.odd_mismatch;
        }
      }
    }
  }
  // Clean accumulated rounding so rows sum to one within 1e-12.
  for (std::size_t r = 0; r < n * na; ++r) {
    double* prow = &trans[r * n];
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += prow[j];
    for (std::size_t j = 0; j < n; ++j) prow[j] /= sum;
  }
  return MdpModel(n, na, std::move(trans), std::move(cost), alpha, ref_state);
}

std::vector<std::size_t> grid_block_groups(std::size_t side, std::size_t block,
                                           std::size_t* n_groups) {
  if (block == 0) {
    throw Error(ErrorCode::kConfig, "aggregation block must be positive");
  }
  const std::size_t per_row = (side + block - 1) / block;
  std::vector<std::size_t> group(side * side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      group[grid_state(side, r, c)] = (r / block) * per_row + c / block;
    }
  }
  if (n_groups) *n_groups = per_row * per_row;
  return group;
}

}  // namespace rsac
