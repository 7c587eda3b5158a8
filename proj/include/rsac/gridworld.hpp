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

#include <array>
#include <cstddef>
#include <vector>

#include "rsac/mdp.hpp"

namespace rsac {

/// Moves in action order 0..8: left, right, up, down, up-left, up-right,
/// down-left, down-right, stay. Displacements are (drow, dcol) with row 0 at
/// the top.
inline constexpr std::size_t kGridActions = 9;
inline constexpr std::array<std::array<int, 2>, kGridActions> kGridMoves{{
    {0, -1}, {0, 1}, {-1, 0}, {1, 0}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}, {0, 0},
}};

/// kWrap: the grid is a torus, so for side >= 3 every move reaches a distinct
/// cell. kClamp: an off-grid move leaves the agent in place.
enum class GridBoundary { kWrap, kClamp };

struct GridConfig {
  std::size_t side = 3;
  double slip_prob = 0.5;
  GridBoundary boundary = GridBoundary::kWrap;
  /// Empty means the four corners.
  std::vector<std::size_t> fixed_cost_states;
  double fixed_cost = 10.0;
  double even_match = 6.0;
  double even_mismatch = 8.0;
  double odd_match = 1.0;
  double odd_mismatch = 9.0;
};

std::vector<std::size_t> corner_states(std::size_t side);

/// Dense D x D slip gridworld. The suggested move is realised with
/// probability 1 - slip_prob, otherwise one of the other eight moves with
/// probability slip_prob / 8 each. Cost is fixed_cost from a fixed-cost
/// state; otherwise it depends on the parity of the action and on whether the
/// realised move is the suggested one.
MdpModel build_gridworld(const GridConfig& config, double alpha,
                         std::size_t ref_state = 0);

/// State index of cell (row, col).
inline std::size_t grid_state(std::size_t side, std::size_t row,
                              std::size_t col) {
  return row * side + col;
}

/// Partition of the grid into block x block squares, numbered row-major.
std::vector<std::size_t> grid_block_groups(std::size_t side, std::size_t block,
                                           std::size_t* n_groups = nullptr);

}  // namespace rsac
