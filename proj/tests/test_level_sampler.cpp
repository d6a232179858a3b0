#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "support.hpp"
#include "ued/level_sampler.hpp"
#include "ued/maze/buffer_io.hpp"

using namespace ued;
using namespace ued::test;

namespace {

using Buffer = LevelBuffer<int>;



SamplerConfig config(double beta, double rho) {
  SamplerConfig c;
  c.temperature = beta;
  c.staleness_coeff = rho;
  return c;
}

}  // namespace

TEST(SamplingWeights, ClosedFormRankExample) {
  const auto b = make_buffer({3, 1, 2}, {0, 0, 0});
  const auto p = sampling_weights(b, config(1.0, 0.0));
  EXPECT_DOUBLE_EQ(p[0], 6.0 / 11.0);
  EXPECT_DOUBLE_EQ(p[1], 2.0 / 11.0);
  EXPECT_DOUBLE_EQ(p[2], 3.0 / 11.0);
}

TEST(SamplingWeights, PureStaleness) {
  const auto p = sampling_weights(make_buffer({1, 2, 3}, {2, 1, 1}), config(0.3, 1.0));
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.25);
  EXPECT_DOUBLE_EQ(p[2], 0.25);
}

TEST(SamplingWeights, SingleEntry) {
  const auto p = sampling_weights(make_buffer({-4}, {3}), config(0.1, 0.7));
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p[0], 1.0);
}

TEST(SamplingWeights, TiesRankByLowerSlot) {
  const auto p = sampling_weights(make_buffer({1, 1}, {0, 0}), config(1.0, 0.0));
  EXPECT_DOUBLE_EQ(p[0], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(p[1], 1.0 / 3.0);
}

TEST(SamplingWeights, EmptyBufferThrows) {
  Buffer b(4);
  EXPECT_THROW(sampling_weights(b, config(1, 0)), std::logic_error);
}

TEST(SamplingWeights, FuzzedBuffersMatchOracleAndNormalise) {
  for (std::uint64_t k = 0; k < 500; ++k) {
    RngStream rng(make_key(k));
    const int n = 1 + rng.uniform_int(30);
    std::vector<double> scores;
    std::vector<std::uint64_t> stale;
    for (int i = 0; i < n; ++i) {
      scores.push_back(rng.uniform_int(4) == 0 ? 0.5 : rng.normal());
      stale.push_back(rng.uniform_int(3) == 0 ? 0 : rng.uniform_int(std::uint64_t{50}));
    }
    const double beta = 0.05 + rng.uniform() * 2.0, rho = rng.uniform();
    const auto p = sampling_weights(make_buffer(scores, stale), config(beta, rho));
    const auto want = weights_oracle(scores, stale, beta, rho);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      ASSERT_GE(p[static_cast<std::size_t>(i)], 0.0);
      ASSERT_NEAR(p[static_cast<std::size_t>(i)], want[static_cast<std::size_t>(i)], 1e-12);
      sum += p[static_cast<std::size_t>(i)];
    }
    ASSERT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(SamplingWeights, RaisingAScoreNeverLowersItsWeight) {
  for (std::uint64_t k = 0; k < 300; ++k) {
    RngStream rng(make_key(k));
    const int n = 2 + rng.uniform_int(15);
    std::vector<double> scores;
    for (int i = 0; i < n; ++i) scores.push_back(rng.normal());
    const std::vector<std::uint64_t> stale(static_cast<std::size_t>(n), 0);
    const auto i = static_cast<std::size_t>(rng.uniform_int(n));
    const auto cfg = config(0.3, 0.0);
    const double before = sampling_weights(make_buffer(scores, stale), cfg)[i];
    scores[i] += std::abs(rng.normal());
    const double after = sampling_weights(make_buffer(scores, stale), cfg)[i];
    ASSERT_GE(after, before);
  }
}

TEST(SampleLevels, EmpiricalFrequenciesMatchWeights) {
  for (std::uint64_t k = 0; k < 20; ++k) {
    RngStream rng(make_key(1000 + k));
    const int n = 2 + rng.uniform_int(20);
    std::vector<double> scores;
    std::vector<std::uint64_t> stale;
    for (int i = 0; i < n; ++i) {
      scores.push_back(rng.normal());
      stale.push_back(rng.uniform_int(std::uint64_t{10}));
    }
    auto b = make_buffer(scores, stale);
    const auto cfg = config(0.1 + rng.uniform(), rng.uniform());
    const auto p = sampling_weights(b, cfg);
    const int draws = 100000;
    const auto got = sample_levels(b, cfg, make_key(k), draws);
    std::vector<double> freq(p.size(), 0.0);
    for (auto s : got.slots) freq[s] += 1.0 / draws;
    double tv = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) tv += 0.5 * std::abs(freq[i] - p[i]);
    EXPECT_LT(tv, 0.01) << "config " << k;
  }
}

TEST(SampleLevels, TouchesDrawnSlots) {
  auto b = make_buffer({1, 2}, {5, 5});
  const auto got = sample_levels(b, config(1, 0), make_key(0), 1);
  const auto slot = got.slots[0];
  EXPECT_EQ(b[slot].last_touched, b.episode_counter());
  EXPECT_EQ(got.levels[0], static_cast<int>(slot));
  const auto p = sampling_weights(b, config(1, 1));
  EXPECT_EQ(p[slot], 0.0);
}

TEST(SampleLevels, SingleEntryAlwaysDrawn) {
  auto b = make_buffer({0.3}, {0});
  const auto got = sample_levels(b, config(0.3, 0.3), make_key(3), 50);
  for (auto s : got.slots) EXPECT_EQ(s, 0u);
}

TEST(ReplayDecision, GateAndFrequency) {
  SamplerConfig cfg;
  Buffer b(10);
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_FALSE(sample_replay_decision(b, cfg, make_key(k)));
  for (int i = 0; i < 10; ++i) b.push_back({i, 0.0, 0, {}});
  cfg.replay_prob = 1.0;
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_TRUE(sample_replay_decision(b, cfg, make_key(k)));
  cfg.replay_prob = 0.5;
  int hits = 0;
  for (std::uint64_t k = 0; k < 10000; ++k) hits += sample_replay_decision(b, cfg, make_key(k));
  EXPECT_NEAR(hits / 10000.0, 0.5, 0.02);
}

TEST(InsertBatch, AppendsThenReplacesMinimumOnStrictImprovement) {
  Buffer b(3);
  SamplerConfig cfg;
  const std::vector<int> lv{1, 2, 3};
  const std::vector<double> sc{0.5, 0.4, 0.6};
  insert_batch<int>(b, lv, sc, {}, cfg);
  EXPECT_EQ(b.size(), 3u);
  EXPECT_EQ(b.episode_counter(), 1u);

  const std::vector<int> low{9};
  const std::vector<double> low_s{0.3};
  auto placed = insert_batch<int>(b, low, low_s, {}, cfg);
  EXPECT_FALSE(placed[0]);
  const std::vector<double> tie_s{0.4};
  placed = insert_batch<int>(b, low, tie_s, {}, cfg);
  EXPECT_FALSE(placed[0]);

  const std::vector<double> high_s{0.45};
  placed = insert_batch<int>(b, low, high_s, {}, cfg);
  ASSERT_TRUE(placed[0]);
  EXPECT_EQ(*placed[0], 1u);
  EXPECT_EQ(b[1].level, 9);
  EXPECT_EQ(b[1].last_touched, b.episode_counter());
}

TEST(InsertBatch, DedupUpdatesInPlace) {
  Buffer b(5);
  SamplerConfig cfg;
  const std::vector<int> lv{7};
  const std::vector<double> s1{0.1}, s2{0.9};
  insert_batch<int>(b, lv, s1, {}, cfg);
  insert_batch<int>(b, lv, s2, {}, cfg);
  EXPECT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].score, 0.9);
  cfg.dedup = false;
  insert_batch<int>(b, lv, s2, {}, cfg);
  EXPECT_EQ(b.size(), 2u);
}

TEST(InsertBatch, RejectsMismatchAndNonFinite) {
  Buffer b(5);
  SamplerConfig cfg;
  const std::vector<int> lv{1, 2};
  const std::vector<double> one{0.1};
  EXPECT_THROW(insert_batch<int>(b, lv, one, {}, cfg), std::invalid_argument);
  const std::vector<double> bad{0.1, std::nan("")};
  EXPECT_THROW(insert_batch<int>(b, lv, bad, {}, cfg), std::invalid_argument);
}

TEST(InsertBatch, FullBufferMinimumNeverDrops) {
  for (std::uint64_t k = 0; k < 300; ++k) {
    RngStream rng(make_key(k));
    Buffer b(8);
    SamplerConfig cfg;
    std::vector<int> lv;
    std::vector<double> sc;
    for (int i = 0; i < 8; ++i) {
      lv.push_back(i);
      sc.push_back(rng.normal());
    }
    insert_batch<int>(b, lv, sc, {}, cfg);
    for (int round = 0; round < 5; ++round) {
      auto before = b.entries();
      std::vector<double> old_scores;
      for (const auto& e : before) old_scores.push_back(e.score);
      std::sort(old_scores.begin(), old_scores.end());
      std::vector<int> cand;
      std::vector<double> cs;
      for (int i = 0; i < 4; ++i) {
        cand.push_back(100 + round * 10 + i);
        cs.push_back(rng.normal());
      }
      insert_batch<int>(b, cand, cs, {}, cfg);
      std::vector<double> new_scores;
      for (const auto& e : b.entries()) new_scores.push_back(e.score);
      std::sort(new_scores.begin(), new_scores.end());
      for (std::size_t i = 0; i < new_scores.size(); ++i) ASSERT_GE(new_scores[i], old_scores[i]);
    }
  }
}

TEST(InsertBatch, DedupIdempotent) {
  SamplerConfig cfg;
  const std::vector<int> lv{4};
  const std::vector<double> sc{1.0};
  Buffer once(5), twice(5);
  insert_batch<int>(once, lv, sc, {}, cfg);
  insert_batch<int>(twice, lv, sc, {}, cfg);
  insert_batch<int>(twice, lv, sc, {}, cfg);
  EXPECT_EQ(once.size(), twice.size());
}

TEST(UpdateBatch, LastWriteWinsAndRanksFollow) {
  auto b = make_buffer({0, 1, 2}, {1, 1, 1});
  const std::vector<std::size_t> slots{0, 0};
  const std::vector<double> sc{3.0, 5.0};
  update_batch(b, std::span<const std::size_t>(slots), sc, {});
  EXPECT_EQ(b[0].score, 5.0);
  EXPECT_EQ(b[0].last_touched, b.episode_counter());
  const auto p = sampling_weights(b, config(1, 0));
  EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 0);
  const std::vector<std::size_t> bad{3};
  const std::vector<double> one{1.0};
  EXPECT_THROW(update_batch(b, std::span<const std::size_t>(bad), one, {}), std::out_of_range);
}

TEST(BufferOps, PureGivenSameInputs) {
  auto a = make_buffer({0.2, 0.9, 0.4}, {3, 0, 1});
  auto b = a;
  const auto ra = sample_levels(a, config(0.3, 0.3), make_key(5), 10);
  const auto rb = sample_levels(b, config(0.3, 0.3), make_key(5), 10);
  EXPECT_EQ(ra.slots, rb.slots);
  EXPECT_EQ(a, b);
}

TEST(BufferText, FuzzedRoundTripsAreByteStable) {
  for (std::uint64_t k = 0; k < 1000; ++k) {
    RngStream rng(make_key(k));
    LevelBuffer<maze::MazeLevel> b(1 + static_cast<std::size_t>(rng.uniform_int(20)));
    const int n = rng.uniform_int(static_cast<int>(b.capacity()) + 1);
    b.set_episode_counter(rng.uniform_int(std::uint64_t{1000}));
    for (int i = 0; i < n; ++i) {
      LevelExtra extra;
      if (rng.bernoulli(0.7)) extra["max_return"] = rng.uniform();
      if (rng.bernoulli(0.2)) extra["other"] = rng.normal() * 1e-7;
      b.push_back({test::fuzz_level(fold_in(make_key(k), static_cast<std::uint64_t>(i)), 2, 13), rng.normal(),
                   rng.uniform_int(b.episode_counter() + 1), extra});
    }
    const auto text = maze::buffer_to_string(b);
    const auto back = maze::buffer_from_string(text);
    ASSERT_EQ(back, b);
    ASSERT_EQ(maze::buffer_to_string(back), text);
  }
}
