#include <gtest/gtest.h>

#include <queue>

#include "oracles.hpp"
#include "support.hpp"
#include "ued/maze/generate.hpp"
#include "ued/maze/shortest_path.hpp"

using namespace ued;
using namespace ued::test;
using namespace ued::maze;

namespace {


int count_differences(const MazeLevel& a, const MazeLevel& b) {
  int walls = 0;
  for (std::size_t i = 0; i < a.walls.size(); ++i) walls += a.walls[i] != b.walls[i];
  return walls;
}

}  // namespace

TEST(Generate, InvariantsHoldOnManySamples) {
  const GeneratorParams p{13, 13, 60};
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto l = generate_random_level(make_key(i), p);
    ASSERT_TRUE(is_valid(l));
    ASSERT_LE(l.wall_count(), 60);
  }
}

TEST(Generate, WallCountIsUniform) {
  const GeneratorParams p{9, 9, 4};
  std::vector<int> counts(5, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(generate_random_level(make_key(static_cast<std::uint64_t>(i)), p).wall_count())];
  for (int c : counts) EXPECT_NEAR(c, n / 5.0, 0.05 * n / 5.0);
}

TEST(Generate, RejectsImpossibleWallBudgets) {
  EXPECT_THROW(generate_random_level(make_key(0), {3, 3, 7}), std::invalid_argument);
  EXPECT_THROW(generate_random_level(make_key(0), {3, 3, -1}), std::invalid_argument);
  EXPECT_NO_THROW(generate_random_level(make_key(0), {3, 3, 6}));
}

TEST(Generate, SameKeySameLevel) {
  const GeneratorParams p;
  EXPECT_EQ(generate_random_level(make_key(4), p), generate_random_level(make_key(4), p));
  EXPECT_NE(generate_random_level(make_key(4), p), generate_random_level(make_key(5), p));
}

TEST(Mutate, ChildrenStayValidAndClose) {
  for (std::uint64_t i = 0; i < 20000; ++i) {
    const auto parent = test::fuzz_level(make_key(i), 3, 13);
    const int edits = 1 + static_cast<int>(i % 20);
    const auto child = mutate_level(parent, fold_in(make_key(i), 99), edits);
    ASSERT_TRUE(is_valid(child));
    const int moves = (child.goal_pos != parent.goal_pos) + (child.agent_pos != parent.agent_pos);
    ASSERT_LE(count_differences(parent, child) + moves, edits);
  }
}

TEST(Mutate, EmptyLevelWithTwentyEditsHasAtMostTwentyWalls) {
  const auto empty = MazeLevel::empty(13, 13);
  for (std::uint64_t i = 0; i < 2000; ++i) ASSERT_LE(mutate_level(empty, make_key(i), 20).wall_count(), 20);
}

TEST(Mutate, ZeroEditsIsIdentity) {
  const auto l = generate_random_level(make_key(1), {});
  EXPECT_EQ(mutate_level(l, make_key(2), 0), l);
}

TEST(ShortestPath, MatchesDijkstraOracle) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto l = generate_random_level(make_key(i), {13, 13, 80});
    const auto grid = shortest_path_distances(l);
    ASSERT_EQ(grid.dist, dijkstra_oracle(l)) << format_level(l);
  }
}

TEST(ShortestPath, HandExample) {
  const auto l = parse_level("G#.\n.#.\n..>\n");
  const auto g = shortest_path_distances(l);
  EXPECT_EQ(g.at({2, 2}), 4);
  EXPECT_EQ(g.at({2, 0}), 6);
  EXPECT_FALSE(g.reachable({1, 0}));
  EXPECT_TRUE(is_solvable(l));
}

TEST(ShortestPath, WalledOffGoalIsUnsolvable) {
  const auto l = parse_level("G#.\n##.\n..>\n");
  EXPECT_FALSE(is_solvable(l));
}
