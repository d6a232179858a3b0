#pragma once

#include <vector>

#include "ued/maze/level.hpp"

namespace ued::maze {

/// Moves-to-goal for every cell (rotations are not counted).
struct DistanceGrid {
  static constexpr int kUnreachable = -1;

  int width = 0;
  int height = 0;
  std::vector<int> dist;  // row-major

  int at(Cell c) const { return dist[static_cast<std::size_t>(c.y * width + c.x)]; }
  bool reachable(Cell c) const { return at(c) != kUnreachable; }
};

/// Breadth-first search outward from the goal over 4-connected floor cells.
/// Linear in the number of cells.
inline DistanceGrid shortest_path_distances(const MazeLevel& level) {
  DistanceGrid grid{level.width, level.height,
                    std::vector<int>(static_cast<std::size_t>(level.num_cells()), DistanceGrid::kUnreachable)};
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(level.num_cells()));
  const int goal = level.index(level.goal_pos);
  grid.dist[static_cast<std::size_t>(goal)] = 0;
  queue.push_back(goal);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Cell c = level.cell(queue[head]);
    const int d = grid.dist[static_cast<std::size_t>(queue[head])];
    for (int dir = 0; dir < 4; ++dir) {
      const Cell n = c + offset(static_cast<Direction>(dir));
      if (!level.in_bounds(n) || level.wall(n)) continue;
      const int ni = level.index(n);
      if (grid.dist[static_cast<std::size_t>(ni)] != DistanceGrid::kUnreachable) continue;
      grid.dist[static_cast<std::size_t>(ni)] = d + 1;
      queue.push_back(ni);
    }
  }
  return grid;
}

inline bool is_solvable(const MazeLevel& level) { return shortest_path_distances(level).reachable(level.agent_pos); }

}  // namespace ued::maze
