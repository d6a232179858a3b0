#pragma once

#include <span>
#include <vector>

#include "ued/algo/accounting.hpp"
#include "ued/algo/config.hpp"
#include "ued/algo/metrics.hpp"
#include "ued/algo/scoring.hpp"
#include "ued/env.hpp"
#include "ued/level_sampler.hpp"
#include "ued/maze/env.hpp"
#include "ued/maze/generate.hpp"
#include "ued/nn.hpp"
#include "ued/ppo.hpp"
#include "ued/rollout.hpp"

namespace ued {

using Real = float;
using AgentParams = ActorCriticParams<Real>;
using ReplayEnv = AutoReplay<maze::MazeEnv>;

inline maze::MazeEnv make_env(const RunConfig& c) { return maze::MazeEnv(c.env); }

inline NetworkShape student_shape(const RunConfig& c) {
  const auto env = make_env(c);
  return {static_cast<int>(env.observation_size()), c.ppo.hidden, env.num_actions()};
}

inline std::vector<maze::MazeLevel> generate_levels(const RunConfig& c, RngKey key, std::size_t n) {
  std::vector<maze::MazeLevel> levels;
  levels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) levels.push_back(maze::generate_random_level(fold_in(key, i), c.generator));
  return levels;
}

struct LevelScores {
  std::vector<double> scores;
  std::vector<LevelExtra> extras;  // carries "max_return"
};

/// Scores one level per env with the configured regret estimate. The running
/// max return is tracked in both modes so switching scores keeps the extra.
inline LevelScores score_levels(const RunConfig& c, const Trajectory<Real>& traj, const GaeResult<Real>& gae,
                                std::span<const double> stored_max) {
  auto mc = score_maxmc(traj, stored_max, c.ppo.gamma);
  LevelScores out;
  out.scores = c.scoring == ScoringFunction::maxmc ? mc.scores : score_pvl(traj, gae);
  out.extras.resize(traj.num_envs);
  for (std::size_t e = 0; e < traj.num_envs; ++e) out.extras[e]["max_return"] = mc.max_returns[e];
  return out;
}

inline void fill_episode_metrics(MetricsRecord& r, const EpisodeStats& stats) {
  r.mean_return = stats.mean_return();
  r.solve_rate = stats.solve_rate();
  r.episodes = stats.episodes.size();
}

/// GAE then PPO on a student trajectory.
inline PpoStats train_on(AgentParams& agent, const Trajectory<Real>& traj, const GaeResult<Real>& gae,
                         const PpoConfig& cfg, std::uint64_t total_updates) {
  return ppo_update(agent, traj, std::span<const Real>(gae.advantages), std::span<const Real>(gae.targets), cfg,
                    total_updates);
}

}  // namespace ued
