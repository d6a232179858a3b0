#pragma once

#include <algorithm>
#include <vector>

#include "ued/algo/common.hpp"
#include "ued/maze/editor.hpp"

namespace ued {

struct PairedState {
  AgentParams protagonist;
  AgentParams antagonist;
  AgentParams adversary;
  CycleTally tally;
  RngKey key;

  friend bool operator==(const PairedState&, const PairedState&) = default;
};

inline maze::MazeEditor make_editor(const RunConfig& c) {
  return maze::MazeEditor({c.generator.width, c.generator.height, c.editor_budget});
}

inline NetworkShape adversary_shape(const RunConfig& c) {
  const auto editor = make_editor(c);
  return {static_cast<int>(editor.observation_size()), c.adversary.hidden, editor.num_actions()};
}

inline PairedState init_paired(const RunConfig& c, std::uint64_t seed) {
  auto [k_students, rest] = split(make_key(seed));
  auto [k_adv, k_run] = split(rest);
  auto [k_pro, k_ant] = split(k_students);
  return {init_actor_critic<Real>(student_shape(c), k_pro), init_actor_critic<Real>(student_shape(c), k_ant),
          init_actor_critic<Real>(adversary_shape(c), k_adv), {}, k_run};
}

/// max over antagonist returns minus mean over protagonist returns. A student
/// with no completed episode on the level contributes 0.
inline double paired_regret(std::span<const double> antagonist_returns, std::span<const double> protagonist_returns) {
  const double best = antagonist_returns.empty()
                          ? 0.0
                          : *std::max_element(antagonist_returns.begin(), antagonist_returns.end());
  double mean = 0.0;
  for (double r : protagonist_returns) mean += r;
  if (!protagonist_returns.empty()) mean /= static_cast<double>(protagonist_returns.size());
  return best - mean;
}

namespace detail {
inline std::vector<std::vector<double>> returns_by_env(const Trajectory<Real>& traj, double gamma, bool discounted) {
  std::vector<std::vector<double>> out(traj.num_envs);
  for (const auto& ep : episode_returns(traj, gamma).episodes)
    out[ep.env].push_back(discounted ? ep.discounted_return : ep.undiscounted_return);
  return out;
}
}  // namespace detail

/// Adversary builds N levels, both students play them, the adversary is
/// rewarded with the regret on its last edit, and all three agents update.
inline MetricsRecord paired_iteration(PairedState& s, const RunConfig& c, std::uint64_t total_updates, int threads = 1) {
  auto [next, k_iter] = split(s.key);
  s.key = next;
  auto [k_edit, k_students] = split(k_iter);
  auto [k_pro, k_ant] = split(k_students);
  const auto n = static_cast<std::size_t>(c.ppo.num_envs);

  const auto editor = make_editor(c);
  const std::vector<maze::MazeLevel> blanks(n, maze::MazeLevel::empty(c.generator.width, c.generator.height));
  auto [k_edit_reset, k_edit_roll] = split(k_edit);
  auto built = rollout(editor, s.adversary, reset_all(editor, std::span(blanks), k_edit_reset),
                       static_cast<std::size_t>(c.editor_budget + 2), k_edit_roll, threads);
  std::vector<maze::MazeLevel> levels;
  levels.reserve(n);
  for (const auto& carry : built.carries) levels.push_back(carry.state.level);

  const ReplayEnv env(make_env(c));
  const auto T = static_cast<std::size_t>(c.ppo.num_steps);
  auto play = [&](const AgentParams& agent, RngKey key) {
    auto [k_reset, k_roll] = split(key);
    return rollout(env, agent, reset_all(env, std::span<const maze::MazeLevel>(levels), k_reset), T, k_roll, threads)
        .trajectory;
  };
  const auto pro_traj = play(s.protagonist, k_pro);
  const auto ant_traj = play(s.antagonist, k_ant);

  const auto pro_returns = detail::returns_by_env(pro_traj, c.ppo.gamma, c.paired_discounted_returns);
  const auto ant_returns = detail::returns_by_env(ant_traj, c.ppo.gamma, c.paired_discounted_returns);
  auto& adv_traj = built.trajectory;
  double regret_sum = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const double regret = paired_regret(ant_returns[e], pro_returns[e]);
    regret_sum += regret;
    adv_traj.rewards[adv_traj.at(adv_traj.num_steps - 1, e)] = static_cast<Real>(regret);
  }

  const auto adv_gae = compute_gae(adv_traj, c.adversary.gamma, c.adversary.gae_lambda);
  const auto adv_stats = train_on(s.adversary, adv_traj, adv_gae, c.adversary, total_updates);
  const auto pro_gae = compute_gae(pro_traj, c.ppo.gamma, c.ppo.gae_lambda);
  const auto pro_stats = train_on(s.protagonist, pro_traj, pro_gae, c.ppo, total_updates);
  const auto ant_gae = compute_gae(ant_traj, c.ppo.gamma, c.ppo.gae_lambda);
  const auto ant_stats = train_on(s.antagonist, ant_traj, ant_gae, c.ppo, total_updates);

  s.tally.updates += 1;
  s.tally.env_steps = env_step_count(Algorithm::paired, s.tally, T, n);

  MetricsRecord r;
  r.iteration = s.tally.updates;
  r.env_steps = s.tally.env_steps;
  r.updates = s.tally.updates;
  r.cycle_type = "paired";
  fill_episode_metrics(r, episode_returns(pro_traj));
  r.losses = pro_stats;
  r.mean_regret = regret_sum / static_cast<double>(n);
  r.adversary_losses = adv_stats;
  r.antagonist_losses = ant_stats;
  return r;
}

}  // namespace ued
