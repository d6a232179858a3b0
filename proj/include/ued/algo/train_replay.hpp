#pragma once

#include <stdexcept>
#include <vector>

#include "ued/algo/common.hpp"
#include "ued/algo/meta_policy.hpp"

namespace ued {

using MazeBuffer = LevelBuffer<maze::MazeLevel>;

/// State shared across the update-cycles of PLR, robust PLR and ACCEL.
struct ReplayState {
  AgentParams agent;
  MazeBuffer buffer;
  MetaPolicyState meta;
  std::vector<std::size_t> last_slots;         // slots drawn by the latest Replay cycle
  std::vector<maze::MazeLevel> last_levels;    // and the levels they held at the time
  CycleTally tally;
  RngKey key;

  friend bool operator==(const ReplayState&, const ReplayState&) = default;
};

inline ReplayState init_replay(const RunConfig& c, std::uint64_t seed) {
  auto [k_init, k_run] = split(make_key(seed));
  const auto v = replay_variant(c);
  ReplayState s{init_actor_critic<Real>(student_shape(c), k_init), MazeBuffer(c.buffer_capacity), {}, {}, {}, {}, k_run};
  s.meta.p = v.p;
  s.meta.q = v.q;
  return s;
}

namespace detail {

struct PlayedLevels {
  Trajectory<Real> trajectory;
  GaeResult<Real> gae;
  LevelScores scores;
};

inline PlayedLevels play_levels(const RunConfig& c, const AgentParams& agent, std::span<const maze::MazeLevel> levels,
                                std::span<const double> stored_max, RngKey key, int threads) {
  const ReplayEnv env(make_env(c));
  auto [k_reset, k_roll] = split(key);
  auto result = rollout(env, agent, reset_all(env, levels, k_reset), static_cast<std::size_t>(c.ppo.num_steps), k_roll,
                        threads);
  auto gae = compute_gae(result.trajectory, c.ppo.gamma, c.ppo.gae_lambda);
  auto scores = score_levels(c, result.trajectory, gae, stored_max);
  return {std::move(result.trajectory), std::move(gae), std::move(scores)};
}

inline MetricsRecord cycle_record(const ReplayState& s, const RunConfig& c, CycleType type,
                                  const Trajectory<Real>& traj) {
  MetricsRecord r;
  r.iteration = s.tally.cycles();
  r.updates = s.tally.updates;
  r.env_steps = s.tally.env_steps;
  r.cycle_type = to_string(type);
  fill_episode_metrics(r, episode_returns(traj));
  r.buffer_size = s.buffer.size();
  r.mean_buffer_score = s.buffer.mean_score();
  (void)c;
  return r;
}

inline void count_cycle(ReplayState& s, const RunConfig& c, CycleType type) {
  switch (type) {
    case CycleType::dr:
      s.tally.dr_cycles += 1;
      break;
    case CycleType::replay:
      s.tally.replay_cycles += 1;
      break;
    case CycleType::mutation:
      s.tally.mutation_cycles += 1;
      break;
  }
  s.tally.env_steps = env_step_count(c.algorithm, s.tally, static_cast<std::uint64_t>(c.ppo.num_steps),
                                     static_cast<std::uint64_t>(c.ppo.num_envs));
}

}  // namespace detail

/// Plays N fresh random levels and offers them to the buffer. The student
/// trains on them only when robust is false.
inline MetricsRecord on_new_levels(ReplayState& s, const RunConfig& c, RngKey key, bool robust, std::uint64_t total_updates,
                                   int threads = 1) {
  auto [k_gen, k_play] = split(key);
  const auto n = static_cast<std::size_t>(c.ppo.num_envs);
  const auto levels = generate_levels(c, k_gen, n);
  const std::vector<double> fresh_max(n, 0.0);
  auto played = detail::play_levels(c, s.agent, levels, fresh_max, k_play, threads);
  insert_batch<maze::MazeLevel>(s.buffer, levels, played.scores.scores, played.scores.extras, c.sampler);
  std::optional<PpoStats> stats;
  if (!robust) {
    stats = train_on(s.agent, played.trajectory, played.gae, c.ppo, total_updates);
    s.tally.updates += 1;
  }
  s.meta.node = MetaNode::A;
  detail::count_cycle(s, c, CycleType::dr);
  auto r = detail::cycle_record(s, c, CycleType::dr, played.trajectory);
  r.losses = stats;
  return r;
}

/// Trains on N levels drawn from the buffer and refreshes their scores.
inline MetricsRecord on_replay_levels(ReplayState& s, const RunConfig& c, RngKey key, std::uint64_t total_updates,
                                      int threads = 1) {
  if (s.buffer.empty()) throw std::logic_error("replay cycle on an empty level buffer");
  auto [k_sample, k_play] = split(key);
  auto drawn = sample_levels(s.buffer, c.sampler, k_sample, static_cast<std::size_t>(c.ppo.num_envs));
  std::vector<double> stored_max(drawn.slots.size(), 0.0);
  for (std::size_t i = 0; i < drawn.slots.size(); ++i) {
    const auto& extra = s.buffer[drawn.slots[i]].extra;
    if (auto it = extra.find("max_return"); it != extra.end()) stored_max[i] = it->second;
  }
  auto played = detail::play_levels(c, s.agent, drawn.levels, stored_max, k_play, threads);
  update_batch(s.buffer, std::span<const std::size_t>(drawn.slots), played.scores.scores, played.scores.extras);
  const auto stats = train_on(s.agent, played.trajectory, played.gae, c.ppo, total_updates);
  s.tally.updates += 1;
  s.last_slots = std::move(drawn.slots);
  s.last_levels = std::move(drawn.levels);
  s.meta.node = MetaNode::B;
  detail::count_cycle(s, c, CycleType::replay);
  auto r = detail::cycle_record(s, c, CycleType::replay, played.trajectory);
  r.losses = stats;
  return r;
}

/// Mutates the last replayed batch, scores the children and offers them to
/// the buffer. The student does not train on this cycle.
inline MetricsRecord on_mutate_levels(ReplayState& s, const RunConfig& c, RngKey key, int threads = 1) {
  if (s.last_levels.empty()) throw std::logic_error("mutation cycle without a preceding replay cycle");
  auto [k_mut, k_play] = split(key);
  std::vector<maze::MazeLevel> children;
  children.reserve(s.last_levels.size());
  for (std::size_t i = 0; i < s.last_levels.size(); ++i)
    children.push_back(maze::mutate_level(s.last_levels[i], fold_in(k_mut, i), c.n_edits));
  const std::vector<double> fresh_max(children.size(), 0.0);
  auto played = detail::play_levels(c, s.agent, children, fresh_max, k_play, threads);
  insert_batch<maze::MazeLevel>(s.buffer, children, played.scores.scores, played.scores.extras, c.sampler);
  s.meta.node = MetaNode::A;
  detail::count_cycle(s, c, CycleType::mutation);
  return detail::cycle_record(s, c, CycleType::mutation, played.trajectory);
}

/// Picks the next cycle: DR until the buffer is fill-ready, then the
/// two-node meta-policy.
inline CycleType next_cycle(ReplayState& s, const RunConfig& c, RngKey key) {
  if (!replay_ready(s.buffer, c.sampler)) {
    s.meta.node = MetaNode::A;
    return CycleType::dr;
  }
  auto [op, next] = meta_policy_next(s.meta, key);
  s.meta = next;
  if (op == CycleType::mutation && s.last_levels.empty()) return CycleType::dr;
  return op;
}

inline MetricsRecord replay_cycle(ReplayState& s, const RunConfig& c, std::uint64_t total_updates, int threads = 1) {
  auto [next, k_cycle] = split(s.key);
  s.key = next;
  auto [k_choice, k_work] = split(k_cycle);
  const auto robust = replay_variant(c).robust;
  switch (next_cycle(s, c, k_choice)) {
    case CycleType::replay:
      return on_replay_levels(s, c, k_work, total_updates, threads);
    case CycleType::mutation:
      return on_mutate_levels(s, c, k_work, threads);
    case CycleType::dr:
    default:
      return on_new_levels(s, c, k_work, robust, total_updates, threads);
  }
}

}  // namespace ued
