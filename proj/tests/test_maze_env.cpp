#include <gtest/gtest.h>

#include "support.hpp"
#include "ued/maze/env.hpp"

using namespace ued;
using namespace ued::maze;

namespace {

constexpr int L = static_cast<int>(Action::left);
constexpr int R = static_cast<int>(Action::right);
constexpr int F = static_cast<int>(Action::forward);

// View oracle: explicit offset table per facing direction.
Cell view_cell(const MazeState& s, int row, int col, int v) {
  const int ahead = v - 1 - row;
  const int side = col - v / 2;
  switch (s.agent_dir) {
    case Direction::up:
      return {s.agent_pos.x + side, s.agent_pos.y - ahead};
    case Direction::right:
      return {s.agent_pos.x + ahead, s.agent_pos.y + side};
    case Direction::down:
      return {s.agent_pos.x - side, s.agent_pos.y + ahead};
    case Direction::left:
      return {s.agent_pos.x - ahead, s.agent_pos.y - side};
  }
  return {};
}

}  // namespace

TEST(MazeEnv, TurnsAndMoves) {
  const MazeEnv env;
  const auto level = parse_level(".....\n.....\n..^..\n.....\n....G\n");
  auto s = env.reset_to_level(level, make_key(0)).state;
  s = env.step(s, F, make_key(0)).state;
  EXPECT_EQ(s.agent_pos, (Cell{2, 1}));
  s = env.step(s, R, make_key(0)).state;
  EXPECT_EQ(s.agent_dir, Direction::right);
  s = env.step(s, L, make_key(0)).state;
  s = env.step(s, L, make_key(0)).state;
  EXPECT_EQ(s.agent_dir, Direction::left);
  EXPECT_EQ(s.timestep, 4);
}

TEST(MazeEnv, WallsAndBordersBlock) {
  const MazeEnv env;
  const auto level = parse_level("^#G\n...\n");
  auto s = env.reset_to_level(level, make_key(0)).state;
  s = env.step(s, F, make_key(0)).state;
  EXPECT_EQ(s.agent_pos, (Cell{0, 0}));
  s = env.step(s, R, make_key(0)).state;
  s = env.step(s, F, make_key(0)).state;
  EXPECT_EQ(s.agent_pos, (Cell{0, 0}));
}

TEST(MazeEnv, GoalRewardDecaysWithTime) {
  MazeParams p;
  p.max_steps = 10;
  const MazeEnv env(p);
  const auto level = parse_level(">.G\n");
  auto s = env.reset_to_level(level, make_key(0)).state;
  s = env.step(s, F, make_key(0)).state;
  const auto r = env.step(s, F, make_key(0));
  EXPECT_TRUE(r.done);
  EXPECT_DOUBLE_EQ(r.reward, 1.0 - 0.9 * 2.0 / 10.0);
}

TEST(MazeEnv, TimeoutEndsWithZeroReward) {
  MazeParams p;
  p.max_steps = 3;
  const MazeEnv env(p);
  auto s = env.reset_to_level(parse_level(">.G\n"), make_key(0)).state;
  StepResult<MazeState, MazeObservation> r;
  for (int t = 0; t < 3; ++t) {
    r = env.step(s, L, make_key(0));
    s = r.state;
    EXPECT_EQ(r.done, t == 2);
    EXPECT_EQ(r.reward, 0.0);
  }
  EXPECT_THROW(env.step(s, L, make_key(0)), ContractError);
}

TEST(MazeEnv, RejectsBadActionsAndLevels) {
  const MazeEnv env;
  auto s = env.reset_to_level(MazeLevel::empty(3, 3), make_key(0)).state;
  EXPECT_THROW(env.step(s, 3, make_key(0)), ContractError);
  EXPECT_THROW(env.step(s, -1, make_key(0)), ContractError);
  auto bad = MazeLevel::empty(3, 3);
  bad.agent_pos = bad.goal_pos;
  EXPECT_THROW(env.reset_to_level(bad, make_key(0)), LevelError);
}

TEST(MazeEnv, ObservationMatchesRotationOracle) {
  const MazeEnv env;
  for (std::uint64_t i = 0; i < 500; ++i) {
    const auto level = test::fuzz_level(make_key(i), 2, 13);
    const auto [s, obs] = env.reset_to_level(level, make_key(i));
    ASSERT_EQ(obs.direction, static_cast<int>(level.agent_dir));
    for (int row = 0; row < 5; ++row)
      for (int col = 0; col < 5; ++col) {
        const Cell c = view_cell(s, row, col, 5);
        ViewChannel want = ViewChannel::empty;
        if (!level.in_bounds(c) || level.wall(c))
          want = ViewChannel::wall;
        else if (c == level.goal_pos)
          want = ViewChannel::goal;
        int total = 0;
        for (int ch = 0; ch < kViewChannels; ++ch) total += obs.at(row, col, static_cast<ViewChannel>(ch));
        ASSERT_EQ(total, 1);
        ASSERT_EQ(obs.at(row, col, want), 1) << "level " << i << " row " << row << " col " << col;
      }
  }
}

TEST(MazeEnv, EncodingLayout) {
  const MazeEnv env;
  EXPECT_EQ(env.observation_size(), 79u);
  const auto obs = env.reset_to_level(parse_level("G..\n.v.\n...\n"), make_key(0)).observation;
  std::vector<float> x(env.observation_size(), -1.0f);
  env.encode(obs, std::span<float>(x));
  for (std::size_t i = 0; i < 75; ++i) EXPECT_EQ(x[i], static_cast<float>(obs.view[i]));
  EXPECT_EQ(x[75], 0.0f);
  EXPECT_EQ(x[77], 1.0f);
}

TEST(MazeEnv, AgentCellIsEmptyInView) {
  const MazeEnv env;
  const auto obs = env.reset_to_level(MazeLevel::empty(5, 5), make_key(0)).observation;
  EXPECT_EQ(obs.at(4, 2, ViewChannel::empty), 1);
}
