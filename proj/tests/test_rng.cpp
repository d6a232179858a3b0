#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "ued/parallel.hpp"
#include "ued/rng.hpp"

using namespace ued;

TEST(Rng, SameKeySameStream) {
  RngStream a(make_key(3)), b(make_key(3));
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, SplitChildrenDiffer) {
  const auto [l, r] = split(make_key(1));
  EXPECT_NE(l, r);
  EXPECT_NE(l, make_key(1));
  EXPECT_NE(fold_in(make_key(1), 0), fold_in(make_key(1), 1));
}

TEST(Rng, UniformInUnitInterval) {
  RngStream rng(make_key(5));
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Rng, UniformIntCoversRangeEvenly) {
  RngStream rng(make_key(9));
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.uniform_int(7))];
  for (int c : counts) EXPECT_NEAR(c, n / 7.0, 0.05 * n / 7.0);
}

TEST(Rng, NormalMoments) {
  RngStream rng(make_key(11));
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Parallel, ChunksCoverEveryIndexOnce) {
  for (int threads : {1, 2, 3, 8}) {
    std::vector<int> hits(37, 0);
    parallel_chunks(hits.size(), threads, [&](std::size_t b, std::size_t e) {
      for (auto i = b; i < e; ++i) ++hits[i];
    });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(Parallel, PropagatesExceptions) {
  EXPECT_THROW(parallel_chunks(10, 3, [](std::size_t b, std::size_t) {
                 if (b == 0) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
