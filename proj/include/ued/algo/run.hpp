#pragma once

#include <variant>

#include "ued/algo/train_dr.hpp"
#include "ued/algo/train_paired.hpp"
#include "ued/algo/train_replay.hpp"

namespace ued {

using TrainState = std::variant<DrState, ReplayState, PairedState>;

inline TrainState init_state(const RunConfig& c, std::uint64_t seed) {
  if (c.algorithm == Algorithm::dr) return init_dr(c, seed);
  if (c.algorithm == Algorithm::paired) return init_paired(c, seed);
  return init_replay(c, seed);
}

/// One seed of one algorithm, advanced an iteration at a time until the
/// env-step budget is spent.
class Run {
 public:
  Run(RunConfig config, std::uint64_t seed, int threads = 1)
      : Run(config, seed, init_state(config, seed), threads) {}

  Run(RunConfig config, std::uint64_t seed, TrainState state, int threads = 1)
      : config_(std::move(config)), seed_(seed), plan_(plan_run(config_)), threads_(threads), state_(std::move(state)) {
    config_.validate();
  }

  const RunConfig& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  const StepPlan& plan() const { return plan_; }
  const TrainState& state() const { return state_; }
  TrainState& state() { return state_; }

  const CycleTally& tally() const {
    return std::visit([](const auto& s) -> const CycleTally& { return s.tally; }, state_);
  }

  bool finished() const { return tally().env_steps >= config_.total_env_steps; }

  /// The policy evaluated on holdout levels (the protagonist under PAIRED).
  const AgentParams& student() const {
    if (const auto* p = std::get_if<PairedState>(&state_)) return p->protagonist;
    if (const auto* r = std::get_if<ReplayState>(&state_)) return r->agent;
    return std::get<DrState>(state_).agent;
  }

  MetricsRecord step() {
    const auto total = plan_.iterations;
    if (auto* d = std::get_if<DrState>(&state_)) return dr_iteration(*d, config_, total, threads_);
    if (auto* p = std::get_if<PairedState>(&state_)) return paired_iteration(*p, config_, total, threads_);
    return replay_cycle(std::get<ReplayState>(state_), config_, total, threads_);
  }

 private:
  RunConfig config_;
  std::uint64_t seed_;
  StepPlan plan_;
  int threads_;
  TrainState state_;
};

}  // namespace ued
