#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "ued/ppo.hpp"
#include "ued/rollout.hpp"

namespace ued {

/// Positive value loss: mean over steps of max(0, A_t).
template <class S>
double pvl_score(std::span<const S> advantages) {
  if (advantages.empty()) return 0.0;
  double s = 0.0;
  for (auto a : advantages) s += std::max(0.0, static_cast<double>(a));
  return s / static_cast<double>(advantages.size());
}

/// Maximum Monte Carlo: mean over steps of max(0, max_return - V_t).
template <class S>
double maxmc_score(std::span<const S> values, double max_return) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (auto v : values) s += std::max(0.0, max_return - static_cast<double>(v));
  return s / static_cast<double>(values.size());
}

namespace detail {
template <class S>
std::vector<S> column(std::span<const S> data, const Trajectory<S>& traj, std::size_t env) {
  std::vector<S> out(traj.num_steps);
  for (std::size_t t = 0; t < traj.num_steps; ++t) out[t] = data[traj.at(t, env)];
  return out;
}
}  // namespace detail

/// PVL for every env of a trajectory (one level per env).
template <class S>
std::vector<double> score_pvl(const Trajectory<S>& traj, const GaeResult<S>& gae) {
  std::vector<double> scores(traj.num_envs);
  for (std::size_t e = 0; e < traj.num_envs; ++e)
    scores[e] = pvl_score<S>(detail::column<S>(gae.advantages, traj, e));
  return scores;
}

struct MaxMcScores {
  std::vector<double> scores;
  std::vector<double> max_returns;
};

/// MaxMC for every env. The running max is the larger of the stored value
/// and the best completed-episode discounted return seen in this trajectory.
template <class S>
MaxMcScores score_maxmc(const Trajectory<S>& traj, std::span<const double> stored_max, double gamma) {
  MaxMcScores out{std::vector<double>(traj.num_envs), std::vector<double>(stored_max.begin(), stored_max.end())};
  const auto stats = episode_returns(traj, gamma);
  for (const auto& ep : stats.episodes) out.max_returns[ep.env] = std::max(out.max_returns[ep.env], ep.discounted_return);
  for (std::size_t e = 0; e < traj.num_envs; ++e)
    out.scores[e] = maxmc_score<S>(detail::column<S>(traj.values, traj, e), out.max_returns[e]);
  return out;
}

}  // namespace ued
