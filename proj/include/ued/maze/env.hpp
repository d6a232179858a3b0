#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ued/env.hpp"
#include "ued/maze/level.hpp"

namespace ued::maze {

enum class Action : int { left = 0, right = 1, forward = 2 };

struct MazeState {
  MazeLevel level;
  Cell agent_pos;
  Direction agent_dir = Direction::up;
  int timestep = 0;

  friend bool operator==(const MazeState&, const MazeState&) = default;
};

/// Channel order of each view cell.
enum class ViewChannel : int { empty = 0, wall = 1, goal = 2 };
inline constexpr int kViewChannels = 3;

/// Agent-centric forward view. Row 0 is farthest ahead; the agent sits on the
/// middle column of the last row, and "up" in the view is the facing direction.
/// Cells outside the grid read as wall.
struct MazeObservation {
  int view_size = 5;
  std::vector<std::uint8_t> view;  // view_size * view_size * kViewChannels, one-hot
  int direction = 0;

  std::uint8_t at(int row, int col, ViewChannel ch) const {
    return view[static_cast<std::size_t>((row * view_size + col) * kViewChannels + static_cast<int>(ch))];
  }

  friend bool operator==(const MazeObservation&, const MazeObservation&) = default;
};

struct MazeParams {
  int max_steps = 250;
  int view_size = 5;
};

class MazeEnv {
 public:
  using Level = MazeLevel;
  using State = MazeState;
  using Observation = MazeObservation;

  MazeEnv() = default;
  explicit MazeEnv(MazeParams params) : params_(params) {
    if (params_.max_steps < 1) throw std::invalid_argument("max_steps must be positive");
    if (params_.view_size < 1 || params_.view_size % 2 == 0)
      throw std::invalid_argument("view_size must be a positive odd number");
  }

  const MazeParams& params() const { return params_; }
  int num_actions() const { return 3; }

  ResetResult<State, Observation> reset_to_level(const Level& level, RngKey /*key*/) const {
    validate(level);
    State s{level, level.agent_pos, level.agent_dir, 0};
    auto obs = observe(s);
    return {std::move(s), std::move(obs)};
  }

  StepResult<State, Observation> step(const State& state, int action, RngKey /*key*/) const {
    if (action < 0 || action >= num_actions())
      throw ContractError("maze action out of range: " + std::to_string(action));
    if (state.timestep >= params_.max_steps) throw ContractError("stepping a finished maze episode");
    State next = state;
    next.timestep += 1;
    switch (static_cast<Action>(action)) {
      case Action::left:
        next.agent_dir = turn_left(state.agent_dir);
        break;
      case Action::right:
        next.agent_dir = turn_right(state.agent_dir);
        break;
      case Action::forward: {
        const Cell target = state.agent_pos + offset(state.agent_dir);
        if (state.level.in_bounds(target) && !state.level.wall(target)) next.agent_pos = target;
        break;
      }
    }
    double reward = 0.0;
    bool done = false;
    if (next.agent_pos == state.level.goal_pos) {
      reward = 1.0 - 0.9 * (static_cast<double>(next.timestep) / params_.max_steps);
      done = true;
    } else if (next.timestep >= params_.max_steps) {
      done = true;
    }
    auto obs = observe(next);
    return {std::move(next), std::move(obs), reward, done};
  }

  Observation observe(const State& state) const {
    const int v = params_.view_size;
    Observation obs;
    obs.view_size = v;
    obs.view.assign(static_cast<std::size_t>(v * v * kViewChannels), 0);
    obs.direction = static_cast<int>(state.agent_dir);
    const Cell fwd = offset(state.agent_dir);
    const Cell right = offset(turn_right(state.agent_dir));
    const int half = v / 2;
    for (int row = 0; row < v; ++row) {
      const int ahead = v - 1 - row;
      for (int col = 0; col < v; ++col) {
        const int side = col - half;
        const Cell c{state.agent_pos.x + fwd.x * ahead + right.x * side,
                     state.agent_pos.y + fwd.y * ahead + right.y * side};
        ViewChannel ch = ViewChannel::empty;
        if (!state.level.in_bounds(c) || state.level.wall(c))
          ch = ViewChannel::wall;
        else if (c == state.level.goal_pos)
          ch = ViewChannel::goal;
        obs.view[static_cast<std::size_t>((row * v + col) * kViewChannels + static_cast<int>(ch))] = 1;
      }
    }
    return obs;
  }

  /// Flattened view followed by a one-hot facing direction.
  std::size_t observation_size() const {
    return static_cast<std::size_t>(params_.view_size * params_.view_size * kViewChannels + 4);
  }

  template <class Scalar>
  void encode(const Observation& obs, std::span<Scalar> out) const {
    const std::size_t n = obs.view.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Scalar>(obs.view[i]);
    for (int d = 0; d < 4; ++d) out[n + static_cast<std::size_t>(d)] = d == obs.direction ? Scalar(1) : Scalar(0);
  }

 private:
  MazeParams params_;
};

}  // namespace ued::maze
