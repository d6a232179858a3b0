#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ued/env.hpp"
#include "ued/nn.hpp"
#include "ued/parallel.hpp"
#include "ued/rng.hpp"

namespace ued {

/// Time-major batched rollout record; element (t, e) lives at t * num_envs + e.
template <class S>
struct Trajectory {
  std::size_t num_steps = 0;
  std::size_t num_envs = 0;
  std::size_t obs_size = 0;
  std::vector<S> observations;  // (T * N) x obs_size
  std::vector<int> actions;
  std::vector<S> log_probs;
  std::vector<S> values;
  std::vector<S> rewards;
  std::vector<std::uint8_t> dones;
  std::vector<S> bootstrap_values;  // V(s_T) per env

  Trajectory() = default;
  Trajectory(std::size_t steps, std::size_t envs, std::size_t obs)
      : num_steps(steps),
        num_envs(envs),
        obs_size(obs),
        observations(steps * envs * obs),
        actions(steps * envs),
        log_probs(steps * envs),
        values(steps * envs),
        rewards(steps * envs),
        dones(steps * envs),
        bootstrap_values(envs) {}

  std::size_t size() const { return num_steps * num_envs; }
  std::size_t at(std::size_t t, std::size_t e) const { return t * num_envs + e; }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

template <class Env>
struct EnvCarry {
  typename Env::State state;
  typename Env::Observation observation;
};

template <class Env>
std::vector<EnvCarry<Env>> reset_all(const Env& env, std::span<const typename Env::Level> levels, RngKey key) {
  std::vector<EnvCarry<Env>> out;
  out.reserve(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    auto r = env.reset_to_level(levels[i], fold_in(key, i));
    out.push_back({std::move(r.state), std::move(r.observation)});
  }
  return out;
}

enum class ActionMode { sample, greedy };

namespace detail {

template <class S>
struct PolicyWorkspace {
  std::vector<S> pre, h1, h2, logits;
  std::vector<double> log_probs;

  explicit PolicyWorkspace(NetworkShape s)
      : pre(static_cast<std::size_t>(s.hidden)),
        h1(static_cast<std::size_t>(s.hidden)),
        h2(static_cast<std::size_t>(s.hidden)),
        logits(static_cast<std::size_t>(s.actions)),
        log_probs(static_cast<std::size_t>(s.actions)) {}
};

// Same arithmetic as forward() on a single row, without allocating.
template <class S>
S policy_eval(const ActorCriticParams<S>& params, std::span<const S> x, PolicyWorkspace<S>& ws) {
  const ParamLayout L(params.shape);
  const auto in = static_cast<std::size_t>(params.shape.input);
  const auto h = static_cast<std::size_t>(params.shape.hidden);
  const auto a = static_cast<std::size_t>(params.shape.actions);
  std::span<const S> w(params.weights);
  dense_forward<S>(w.subspan(L.w1, h * in), w.subspan(L.b1, h), x, ws.pre);
  tanh_forward<S>(ws.pre, ws.h1);
  dense_forward<S>(w.subspan(L.w2, h * h), w.subspan(L.b2, h), ws.h1, ws.pre);
  tanh_forward<S>(ws.pre, ws.h2);
  dense_forward<S>(w.subspan(L.wpi, a * h), w.subspan(L.bpi, a), ws.h2, ws.logits);
  S value{};
  dense_forward<S>(w.subspan(L.wv, h), w.subspan(L.bv, 1), ws.h2, std::span<S>(&value, 1));
  log_softmax<S, double>(ws.logits, ws.log_probs);
  return value;
}

inline int pick_action(std::span<const double> log_probs, ActionMode mode, RngKey key) {
  if (mode == ActionMode::greedy)
    return static_cast<int>(std::max_element(log_probs.begin(), log_probs.end()) - log_probs.begin());
  RngStream rng(key);
  double u = rng.uniform();
  for (std::size_t i = 0; i + 1 < log_probs.size(); ++i) {
    u -= std::exp(log_probs[i]);
    if (u < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(log_probs.size()) - 1;
}

}  // namespace detail

template <class Env, class S>
struct RolloutResult {
  Trajectory<S> trajectory;
  std::vector<EnvCarry<Env>> carries;
};

/// Runs num_steps policy steps in every env. Each env draws from its own key
/// stream (env index, step index), so the output does not depend on threads.
template <EncodableEnv Env, class S>
RolloutResult<Env, S> rollout(const Env& env, const ActorCriticParams<S>& params, std::vector<EnvCarry<Env>> carries,
                              std::size_t num_steps, RngKey key, int threads = 1,
                              ActionMode mode = ActionMode::sample) {
  const std::size_t n = carries.size();
  const std::size_t obs_size = env.observation_size();
  if (static_cast<std::size_t>(params.shape.input) != obs_size)
    throw std::invalid_argument("rollout: network input does not match the observation size");
  if (params.shape.actions != env.num_actions())
    throw std::invalid_argument("rollout: network action count does not match the env");
  Trajectory<S> traj(num_steps, n, obs_size);

  parallel_chunks(n, threads, [&](std::size_t begin, std::size_t end) {
    detail::PolicyWorkspace<S> ws(params.shape);
    std::vector<S> x(obs_size);
    for (std::size_t e = begin; e < end; ++e) {
      const RngKey env_key = fold_in(key, e);
      auto& carry = carries[e];
      for (std::size_t t = 0; t < num_steps; ++t) {
        const std::size_t i = traj.at(t, e);
        std::span<S> obs_row(traj.observations.data() + i * obs_size, obs_size);
        env.encode(carry.observation, obs_row);
        const S value = detail::policy_eval<S>(params, obs_row, ws);
        const auto [act_key, step_key] = split(fold_in(env_key, t));
        const int action = detail::pick_action(ws.log_probs, mode, act_key);
        auto r = env.step(carry.state, action, step_key);
        traj.actions[i] = action;
        traj.log_probs[i] = static_cast<S>(ws.log_probs[static_cast<std::size_t>(action)]);
        traj.values[i] = value;
        traj.rewards[i] = static_cast<S>(r.reward);
        traj.dones[i] = r.done ? 1 : 0;
        carry.state = std::move(r.state);
        carry.observation = std::move(r.observation);
      }
      env.encode(carry.observation, std::span<S>(x));
      traj.bootstrap_values[e] = detail::policy_eval<S>(params, x, ws);
    }
  });
  return {std::move(traj), std::move(carries)};
}

struct Episode {
  std::size_t env = 0;
  double undiscounted_return = 0.0;
  double discounted_return = 0.0;
  int length = 0;
  bool solved = false;
};

struct EpisodeStats {
  std::vector<Episode> episodes;  // grouped by env, in time order within an env
  std::size_t incomplete = 0;     // trailing episodes cut off by the rollout end

  double mean_return() const {
    if (episodes.empty()) return 0.0;
    double s = 0.0;
    for (const auto& ep : episodes) s += ep.undiscounted_return;
    return s / static_cast<double>(episodes.size());
  }

  double solve_rate() const {
    if (episodes.empty()) return 0.0;
    std::size_t k = 0;
    for (const auto& ep : episodes) k += ep.solved;
    return static_cast<double>(k) / static_cast<double>(episodes.size());
  }
};

/// Splits each env's stream on done flags. An episode counts as solved when
/// its terminal reward is positive. Discounted returns are measured from the
/// first step seen in this trajectory.
template <class S>
EpisodeStats episode_returns(const Trajectory<S>& traj, double gamma = 1.0) {
  EpisodeStats stats;
  for (std::size_t e = 0; e < traj.num_envs; ++e) {
    double ret = 0.0, disc = 0.0, g = 1.0;
    int len = 0;
    for (std::size_t t = 0; t < traj.num_steps; ++t) {
      const std::size_t i = traj.at(t, e);
      const double r = static_cast<double>(traj.rewards[i]);
      ret += r;
      disc += g * r;
      g *= gamma;
      ++len;
      if (traj.dones[i]) {
        stats.episodes.push_back({e, ret, disc, len, r > 0.0});
        ret = disc = 0.0;
        g = 1.0;
        len = 0;
      }
    }
    if (len > 0) ++stats.incomplete;
  }
  return stats;
}

}  // namespace ued
