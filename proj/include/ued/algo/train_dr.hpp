#pragma once

#include <vector>

#include "ued/algo/common.hpp"

namespace ued {

using DrEnv = AutoReset<maze::MazeEnv>;

/// Domain randomization keeps its envs alive between updates: a trailing
/// episode that did not finish in one rollout continues in the next, and
/// every termination draws a fresh random level.
struct DrState {
  AgentParams agent;
  std::vector<EnvCarry<DrEnv>> carries;
  CycleTally tally;
  RngKey key;
};

inline DrEnv make_dr_env(const RunConfig& c) {
  const maze::GeneratorParams gen = c.generator;
  return wrap_auto_reset(make_env(c), [gen](RngKey k) { return maze::generate_random_level(k, gen); });
}

inline DrState init_dr(const RunConfig& c, std::uint64_t seed) {
  auto [k_init, rest] = split(make_key(seed));
  auto [k_levels, k_run] = split(rest);
  const auto env = make_dr_env(c);
  const auto levels = generate_levels(c, k_levels, static_cast<std::size_t>(c.ppo.num_envs));
  return {init_actor_critic<Real>(student_shape(c), k_init), reset_all(env, std::span(levels), fold_in(k_levels, 0xfeed)),
          {}, k_run};
}

/// One rollout of T steps in every env, then one PPO update.
inline MetricsRecord dr_iteration(DrState& s, const RunConfig& c, std::uint64_t total_updates, int threads = 1) {
  const auto env = make_dr_env(c);
  auto [next, k_roll] = split(s.key);
  s.key = next;
  auto result = rollout(env, s.agent, std::move(s.carries), static_cast<std::size_t>(c.ppo.num_steps), k_roll, threads);
  s.carries = std::move(result.carries);
  const auto& traj = result.trajectory;
  const auto gae = compute_gae(traj, c.ppo.gamma, c.ppo.gae_lambda);
  const auto stats = train_on(s.agent, traj, gae, c.ppo, total_updates);
  s.tally.dr_cycles += 1;
  s.tally.updates += 1;
  s.tally.env_steps = env_step_count(Algorithm::dr, s.tally, static_cast<std::uint64_t>(c.ppo.num_steps),
                                     static_cast<std::uint64_t>(c.ppo.num_envs));
  MetricsRecord r;
  r.iteration = s.tally.updates;
  r.env_steps = s.tally.env_steps;
  r.updates = s.tally.updates;
  r.cycle_type = "dr";
  fill_episode_metrics(r, episode_returns(traj));
  r.losses = stats;
  return r;
}

}  // namespace ued
