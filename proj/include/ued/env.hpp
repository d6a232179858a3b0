#pragma once

#include <concepts>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>

#include "ued/rng.hpp"

namespace ued {

/// Raised when a caller breaks an operation's precondition (bad action id,
/// stepping a finished episode, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised for levels that violate an environment's level invariants.
class LevelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class State, class Observation>
struct StepResult {
  State state;
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

template <class State, class Observation>
struct ResetResult {
  State state;
  Observation observation;
};

// An underspecified environment has no reset(): every episode starts from an
// explicit level, and the level distribution lives outside the environment.
// step and reset_to_level are const and take the RNG explicitly, so identical
// inputs always give identical outputs.
template <class E>
concept UnderspecifiedEnv = requires(const E& env, const typename E::State& state,
                                     const typename E::Level& level, int action, RngKey key) {
  typename E::Level;
  typename E::State;
  typename E::Observation;
  { env.num_actions() } -> std::convertible_to<int>;
  { env.step(state, action, key) } -> std::same_as<StepResult<typename E::State, typename E::Observation>>;
  { env.reset_to_level(level, key) } -> std::same_as<ResetResult<typename E::State, typename E::Observation>>;
};

/// Environments whose observations flatten into a fixed-width network input.
template <class E>
concept EncodableEnv = UnderspecifiedEnv<E> &&
    requires(const E& env, const typename E::Observation& obs, std::span<float> out) {
      { env.observation_size() } -> std::convertible_to<std::size_t>;
      env.encode(obs, out);
    };

namespace detail {
// Reset keys are derived from the step key so a non-terminal step sees the
// exact key the unwrapped env would.
inline RngKey reset_key_for(RngKey step_key) { return fold_in(step_key, 0x7265736574ULL); }
}  // namespace detail

/// Upon termination, resets to the level that was just played. The terminal
/// transition's reward and done flag are returned with the post-reset state.
template <UnderspecifiedEnv Env>
class AutoReplay {
 public:
  using Level = typename Env::Level;
  using Observation = typename Env::Observation;
  struct State {
    typename Env::State inner;
    Level level;
  };

  explicit AutoReplay(Env env) : env_(std::move(env)) {}

  int num_actions() const { return env_.num_actions(); }
  const Env& inner() const { return env_; }

  ResetResult<State, Observation> reset_to_level(const Level& level, RngKey key) const {
    auto r = env_.reset_to_level(level, key);
    return {State{std::move(r.state), level}, std::move(r.observation)};
  }

  StepResult<State, Observation> step(const State& state, int action, RngKey key) const {
    auto r = env_.step(state.inner, action, key);
    if (!r.done) return {State{std::move(r.state), state.level}, std::move(r.observation), r.reward, false};
    auto fresh = env_.reset_to_level(state.level, detail::reset_key_for(key));
    return {State{std::move(fresh.state), state.level}, std::move(fresh.observation), r.reward, true};
  }

  std::size_t observation_size() const
    requires EncodableEnv<Env>
  {
    return env_.observation_size();
  }

  template <class Scalar>
  void encode(const Observation& obs, std::span<Scalar> out) const {
    env_.encode(obs, out);
  }

 private:
  Env env_;
};

/// Like AutoReplay, but a fresh level is drawn from level_source on every
/// termination.
template <UnderspecifiedEnv Env>
class AutoReset {
 public:
  using Level = typename Env::Level;
  using Observation = typename Env::Observation;
  using LevelSource = std::function<Level(RngKey)>;
  struct State {
    typename Env::State inner;
    Level level;
  };

  AutoReset(Env env, LevelSource level_source) : env_(std::move(env)), source_(std::move(level_source)) {}

  int num_actions() const { return env_.num_actions(); }
  const Env& inner() const { return env_; }

  ResetResult<State, Observation> reset_to_level(const Level& level, RngKey key) const {
    auto r = env_.reset_to_level(level, key);
    return {State{std::move(r.state), level}, std::move(r.observation)};
  }

  StepResult<State, Observation> step(const State& state, int action, RngKey key) const {
    auto r = env_.step(state.inner, action, key);
    if (!r.done) return {State{std::move(r.state), state.level}, std::move(r.observation), r.reward, false};
    auto [level_key, init_key] = split(detail::reset_key_for(key));
    Level next = source_(level_key);
    auto fresh = env_.reset_to_level(next, init_key);
    return {State{std::move(fresh.state), std::move(next)}, std::move(fresh.observation), r.reward, true};
  }

  std::size_t observation_size() const
    requires EncodableEnv<Env>
  {
    return env_.observation_size();
  }

  template <class Scalar>
  void encode(const Observation& obs, std::span<Scalar> out) const {
    env_.encode(obs, out);
  }

 private:
  Env env_;
  LevelSource source_;
};

template <UnderspecifiedEnv Env>
AutoReplay<Env> wrap_auto_replay(Env env) {
  return AutoReplay<Env>(std::move(env));
}

template <UnderspecifiedEnv Env>
AutoReset<Env> wrap_auto_reset(Env env, typename AutoReset<Env>::LevelSource level_source) {
  return AutoReset<Env>(std::move(env), std::move(level_source));
}

}  // namespace ued
