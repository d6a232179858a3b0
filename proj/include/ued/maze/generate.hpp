#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "ued/maze/level.hpp"
#include "ued/rng.hpp"

namespace ued::maze {

struct GeneratorParams {
  int width = 13;
  int height = 13;
  int max_walls = 25;
};

/// Uniform wall count in [0, max_walls], walls placed without replacement,
/// then goal and agent on distinct free cells. Solvability is not checked.
inline MazeLevel generate_random_level(RngKey key, const GeneratorParams& params) {
  if (params.width < 1 || params.height < 1) throw std::invalid_argument("maze dimensions must be positive");
  const int cells = params.width * params.height;
  if (params.max_walls < 0 || params.max_walls >= cells - 2)
    throw std::invalid_argument("max_walls must lie in [0, width*height - 2)");

  RngStream rng(key);
  const int n_walls = rng.uniform_int(params.max_walls + 1);

  // Partial Fisher-Yates: first n_walls picks are walls, then goal, then agent.
  std::vector<int> order(static_cast<std::size_t>(cells));
  std::iota(order.begin(), order.end(), 0);
  const int picks = n_walls + 2;
  for (int i = 0; i < picks; ++i) {
    const int j = i + rng.uniform_int(cells - i);
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }

  MazeLevel level = MazeLevel::empty(params.width, params.height);
  for (int i = 0; i < n_walls; ++i) level.walls[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;
  level.goal_pos = level.cell(order[static_cast<std::size_t>(n_walls)]);
  level.agent_pos = level.cell(order[static_cast<std::size_t>(n_walls + 1)]);
  level.agent_dir = static_cast<Direction>(rng.uniform_int(4));
  return level;
}

enum class EditKind : int { toggle_wall = 0, move_goal = 1, move_agent = 2 };

namespace detail {

// Uniform pick among floor cells that are neither agent nor goal; -1 if none.
inline int pick_free_cell(const MazeLevel& level, RngStream& rng) {
  std::vector<int> free;
  free.reserve(static_cast<std::size_t>(level.num_cells()));
  const int agent = level.index(level.agent_pos);
  const int goal = level.index(level.goal_pos);
  for (int i = 0; i < level.num_cells(); ++i)
    if (level.walls[static_cast<std::size_t>(i)] == 0 && i != agent && i != goal) free.push_back(i);
  if (free.empty()) return -1;
  return free[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(free.size())))];
}

}  // namespace detail

/// Applies one atomic edit in place.
inline void apply_edit(MazeLevel& level, EditKind kind, RngStream& rng) {
  switch (kind) {
    case EditKind::toggle_wall: {
      const int agent = level.index(level.agent_pos);
      const int goal = level.index(level.goal_pos);
      int idx = 0;
      do {
        idx = rng.uniform_int(level.num_cells());
      } while (idx == agent || idx == goal);
      level.walls[static_cast<std::size_t>(idx)] ^= 1;
      break;
    }
    case EditKind::move_goal: {
      const int idx = detail::pick_free_cell(level, rng);
      if (idx >= 0) level.goal_pos = level.cell(idx);
      break;
    }
    case EditKind::move_agent: {
      const int idx = detail::pick_free_cell(level, rng);
      if (idx >= 0) level.agent_pos = level.cell(idx);
      level.agent_dir = static_cast<Direction>(rng.uniform_int(4));
      break;
    }
  }
}

/// n_edits atomic edits, each uniformly one of: toggle a wall, move the goal,
/// move the agent (with a fresh direction). Wall toggles never hit the
/// agent or goal cell.
inline MazeLevel mutate_level(const MazeLevel& level, RngKey key, int n_edits) {
  if (n_edits < 0) throw std::invalid_argument("n_edits must be non-negative");
  validate(level);
  MazeLevel out = level;
  if (level.num_cells() <= 2) return out;
  RngStream rng(key);
  for (int i = 0; i < n_edits; ++i) apply_edit(out, static_cast<EditKind>(rng.uniform_int(3)), rng);
  return out;
}

}  // namespace ued::maze
