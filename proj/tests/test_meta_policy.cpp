#include <gtest/gtest.h>

#include <array>

#include "ued/algo/meta_policy.hpp"

using namespace ued;

namespace {

std::array<double, 3> row_frequencies(MetaNode node, double p, double q, int draws) {
  std::array<double, 3> f{};
  for (int i = 0; i < draws; ++i) {
    const auto [op, next] = meta_policy_next({node, p, q}, make_key(static_cast<std::uint64_t>(i)));
    f[static_cast<std::size_t>(op)] += 1.0 / draws;
    EXPECT_EQ(next.node, op == CycleType::replay ? MetaNode::B : MetaNode::A);
  }
  return f;
}

}  // namespace

TEST(MetaPolicy, RowsMatchTransitionMatrix) {
  for (auto [p, q] : {std::pair{0.5, 0.0}, {0.8, 1.0}, {0.3, 0.5}}) {
    const auto a = row_frequencies(MetaNode::A, p, q, 100000);
    EXPECT_NEAR(a[0], 1 - p, 0.01);
    EXPECT_NEAR(a[1], p, 0.01);
    EXPECT_EQ(a[2], 0.0);
    const auto b = row_frequencies(MetaNode::B, p, q, 100000);
    EXPECT_NEAR(b[0], (1 - p) * (1 - q), 0.01);
    EXPECT_NEAR(b[1], p * (1 - q), 0.01);
    EXPECT_NEAR(b[2], q, 0.01);
  }
}

TEST(MetaPolicy, MutationAlwaysFollowsReplayWhenQIsOne) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const auto [op, next] = meta_policy_next({MetaNode::B, 0.8, 1.0}, make_key(k));
    ASSERT_EQ(op, CycleType::mutation);
    ASSERT_EQ(next.node, MetaNode::A);
  }
}

TEST(MetaPolicy, RejectsBadProbabilities) {
  EXPECT_THROW(meta_policy_next({MetaNode::A, 1.5, 0.0}, make_key(0)), std::invalid_argument);
  EXPECT_THROW(meta_policy_next({MetaNode::A, 0.5, -0.1}, make_key(0)), std::invalid_argument);
}

TEST(MetaPolicy, Names) {
  EXPECT_STREQ(to_string(CycleType::dr), "dr");
  EXPECT_STREQ(to_string(CycleType::replay), "replay");
  EXPECT_STREQ(to_string(CycleType::mutation), "mutation");
}
