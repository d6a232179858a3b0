// Generates a maze, checks it with the shortest-path oracle, then trains a
// small DR agent for a few updates and prints its metrics.

#include <cstdio>
#include <iostream>

#include "ued/ued.hpp"

int main() {
  using namespace ued;

  maze::GeneratorParams gen{9, 9, 10};
  const auto level = maze::generate_random_level(make_key(7), gen);
  std::cout << maze::format_level(level);
  const auto dist = maze::shortest_path_distances(level);
  if (dist.reachable(level.agent_pos))
    std::printf("shortest path: %d moves\n", dist.at(level.agent_pos));
  else
    std::printf("goal unreachable\n");

  const maze::MazeEnv env;
  const auto oracle = evaluate(OraclePolicy{}, env, std::span(&level, 1), 1, make_key(0));
  std::printf("oracle solve rate: %.2f\n", oracle.mean_solve_rate);

  RunConfig cfg;
  cfg.algorithm = Algorithm::dr;
  cfg.generator = gen;
  cfg.ppo.num_envs = 8;
  cfg.ppo.num_steps = 64;
  cfg.ppo.lr = 1e-3;
  cfg.total_env_steps = 8 * 64 * 5;
  Run run(cfg, 0);
  while (!run.finished()) std::cout << to_json_line(run.step());
  return 0;
}
