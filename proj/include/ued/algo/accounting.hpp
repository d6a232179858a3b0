#pragma once

#include <cstdint>

#include "ued/algo/config.hpp"

namespace ued {

/// Running counts of what a training run has done.
struct CycleTally {
  std::uint64_t dr_cycles = 0;
  std::uint64_t replay_cycles = 0;
  std::uint64_t mutation_cycles = 0;
  std::uint64_t updates = 0;    // PPO updates of the student (protagonist for PAIRED)
  std::uint64_t env_steps = 0;  // student interactions; editor steps excluded

  std::uint64_t cycles() const { return dr_cycles + replay_cycles + mutation_cycles; }
  friend bool operator==(const CycleTally&, const CycleTally&) = default;
};

/// Environment interactions implied by a tally:
///   DR            T * N * updates
///   replay-based  T * N * (dr + replay + mutation cycles)
///   PAIRED        T * N * updates * 2 students
inline std::uint64_t env_step_count(Algorithm algo, const CycleTally& t, std::uint64_t num_steps,
                                    std::uint64_t num_envs) {
  const std::uint64_t per = num_steps * num_envs;
  switch (algo) {
    case Algorithm::dr:
      return per * t.updates;
    case Algorithm::paired:
      return per * t.updates * 2;
    default:
      return per * t.cycles();
  }
}

/// Iterations (PPO updates for DR/PAIRED, update-cycles for replay-based
/// methods) needed to reach the step budget, computed without any rollouts.
struct StepPlan {
  std::uint64_t iterations = 0;
  std::uint64_t steps_per_iteration = 0;
  std::uint64_t env_steps = 0;
};

inline StepPlan plan_run(const RunConfig& c) {
  StepPlan plan;
  const std::uint64_t per = static_cast<std::uint64_t>(c.ppo.num_steps) * static_cast<std::uint64_t>(c.ppo.num_envs);
  plan.steps_per_iteration = c.algorithm == Algorithm::paired ? 2 * per : per;
  plan.iterations = (c.total_env_steps + plan.steps_per_iteration - 1) / plan.steps_per_iteration;
  plan.env_steps = plan.iterations * plan.steps_per_iteration;
  return plan;
}

}  // namespace ued
