#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ued/env.hpp"
#include "ued/maze/level.hpp"

namespace ued::maze {

/// A level under construction. Edit 0 places the goal, edit 1 the agent, and
/// every later edit toggles one wall; the episode ends after budget + 2 edits.
struct EditorState {
  MazeLevel level;
  int edit_index = 0;
  int budget = 20;

  bool finished() const { return edit_index >= budget + 2; }
  friend bool operator==(const EditorState&, const EditorState&) = default;
};

struct EditorObservation {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> grid;  // width * height * 3: wall, goal, agent
  int edit_index = 0;
  int budget = 0;

  friend bool operator==(const EditorObservation&, const EditorObservation&) = default;
};

struct EditorParams {
  int width = 13;
  int height = 13;
  int budget = 20;
};

class MazeEditor {
 public:
  using Level = MazeLevel;
  using State = EditorState;
  using Observation = EditorObservation;

  MazeEditor() = default;
  explicit MazeEditor(EditorParams params) : params_(params) {
    if (params_.width * params_.height < 2) throw std::invalid_argument("editor grid too small");
    if (params_.budget < 1) throw std::invalid_argument("editor budget must be positive");
  }

  const EditorParams& params() const { return params_; }
  int num_actions() const { return params_.width * params_.height; }

  /// Starts editing from a base level (typically MazeLevel::empty).
  ResetResult<State, Observation> reset_to_level(const Level& base, RngKey /*key*/) const {
    validate(base);
    if (base.width != params_.width || base.height != params_.height)
      throw LevelError("editor base level has the wrong dimensions");
    State s{base, 0, params_.budget};
    auto obs = observe(s);
    return {std::move(s), std::move(obs)};
  }

  StepResult<State, Observation> step(const State& state, int action, RngKey key) const {
    if (action < 0 || action >= num_actions())
      throw ContractError("editor cell index out of range: " + std::to_string(action));
    if (state.finished()) throw ContractError("editor episode already finished");
    State next = state;
    MazeLevel& level = next.level;
    const Cell target = level.cell(action);
    if (state.edit_index == 0) {
      if (target == level.agent_pos) level.agent_pos = level.goal_pos;
      level.set_wall(target, false);
      level.goal_pos = target;
    } else if (state.edit_index == 1) {
      RngStream rng(key);
      Cell chosen = target;
      if (chosen == level.goal_pos) {
        int idx = 0;
        do {
          idx = rng.uniform_int(level.num_cells());
        } while (idx == level.index(level.goal_pos));
        chosen = level.cell(idx);
      }
      level.set_wall(chosen, false);
      level.agent_pos = chosen;
      level.agent_dir = static_cast<Direction>(rng.uniform_int(4));
    } else if (target != level.agent_pos && target != level.goal_pos) {
      level.set_wall(target, !level.wall(target));
    }
    next.edit_index += 1;
    const bool done = next.finished();
    auto obs = observe(next);
    return {std::move(next), std::move(obs), 0.0, done};
  }

  Observation observe(const State& state) const {
    const MazeLevel& level = state.level;
    Observation obs{level.width, level.height, {}, state.edit_index, state.budget};
    obs.grid.assign(static_cast<std::size_t>(level.num_cells() * 3), 0);
    for (int i = 0; i < level.num_cells(); ++i) obs.grid[static_cast<std::size_t>(i * 3)] = level.walls[static_cast<std::size_t>(i)];
    obs.grid[static_cast<std::size_t>(level.index(level.goal_pos) * 3 + 1)] = 1;
    obs.grid[static_cast<std::size_t>(level.index(level.agent_pos) * 3 + 2)] = 1;
    return obs;
  }

  /// Grid channels, one-hot edit phase (goal / agent / wall), then progress in [0, 1].
  std::size_t observation_size() const { return static_cast<std::size_t>(params_.width * params_.height * 3 + 4); }

  template <class Scalar>
  void encode(const Observation& obs, std::span<Scalar> out) const {
    const std::size_t n = obs.grid.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Scalar>(obs.grid[i]);
    const int phase = obs.edit_index < 2 ? obs.edit_index : 2;
    for (int p = 0; p < 3; ++p) out[n + static_cast<std::size_t>(p)] = p == phase ? Scalar(1) : Scalar(0);
    out[n + 3] = static_cast<Scalar>(static_cast<double>(obs.edit_index) / (obs.budget + 2));
  }

 private:
  EditorParams params_;
};

}  // namespace ued::maze
