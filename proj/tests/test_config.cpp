#include <gtest/gtest.h>

#include "ued/algo/accounting.hpp"
#include "ued/algo/config_json.hpp"

using namespace ued;
using nlohmann::json;

namespace {

std::string error_key(const json& j) {
  try {
    config_from_json(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

}  // namespace

TEST(Config, DefaultsFromEmptyObject) {
  const auto c = config_from_json(json::object());
  EXPECT_EQ(c.algorithm, Algorithm::dr);
  EXPECT_EQ(c.scoring, ScoringFunction::maxmc);
  EXPECT_EQ(c.ppo.num_steps, 256);
  EXPECT_EQ(c.ppo.num_envs, 32);
  EXPECT_DOUBLE_EQ(c.ppo.gamma, 0.995);
  EXPECT_DOUBLE_EQ(c.ppo.gae_lambda, 0.98);
  EXPECT_DOUBLE_EQ(c.ppo.lr, 1e-4);
  EXPECT_EQ(c.ppo.epochs, 5);
  EXPECT_DOUBLE_EQ(c.ppo.ent_coeff, 1e-3);
  EXPECT_DOUBLE_EQ(c.adversary.ent_coeff, 5e-2);
  EXPECT_EQ(c.buffer_capacity, 4000u);
  EXPECT_DOUBLE_EQ(c.sampler.temperature, 0.3);
  EXPECT_DOUBLE_EQ(c.sampler.staleness_coeff, 0.3);
  EXPECT_EQ(c.n_edits, 20);
  EXPECT_EQ(c.env.max_steps, 250);
  EXPECT_EQ(c.generator.max_walls, 25);
}

TEST(Config, VariantTable) {
  auto v = replay_variant(config_from_json({{"algorithm", "plr"}}));
  EXPECT_EQ(v.p, 0.5);
  EXPECT_EQ(v.q, 0.0);
  EXPECT_FALSE(v.robust);
  v = replay_variant(config_from_json({{"algorithm", "plr_robust"}}));
  EXPECT_EQ(v.q, 0.0);
  EXPECT_TRUE(v.robust);
  v = replay_variant(config_from_json({{"algorithm", "accel"}}));
  EXPECT_EQ(v.p, 0.8);
  EXPECT_EQ(v.q, 1.0);
  EXPECT_TRUE(v.robust);
  v = replay_variant(config_from_json({{"algorithm", "accel"}, {"sampler", {{"replay_prob", 0.6}}}}));
  EXPECT_EQ(v.p, 0.6);
}

TEST(Config, UnknownKeysNamed) {
  EXPECT_EQ(error_key({{"bogus", 1}}), "bogus");
  EXPECT_EQ(error_key({{"ppo", {{"lrr", 1}}}}), "ppo.lrr");
  EXPECT_EQ(error_key({{"maze", {{"depth", 1}}}}), "maze.depth");
  EXPECT_EQ(error_key({{"sampler", {{"prioritization", "proportional"}}}}), "sampler.prioritization");
}

TEST(Config, InvalidValuesNamed) {
  EXPECT_EQ(error_key({{"algorithm", "ppo"}}), "algorithm");
  EXPECT_EQ(error_key({{"ppo", {{"num_steps", "many"}}}}), "ppo.num_steps");
  EXPECT_EQ(error_key({{"ppo", {{"minibatches", 4}}}}), "ppo");
  EXPECT_EQ(error_key({{"maze", {{"width", 3}, {"height", 3}, {"max_walls", 7}}}}), "maze.max_walls");
  EXPECT_EQ(error_key({{"sampler", {{"replay_prob", 2.0}}}}), "sampler.replay_prob");
}

TEST(Config, ResolvedJsonRoundTrips) {
  const auto c = config_from_json({{"algorithm", "accel"}, {"ppo", {{"lr", 3e-4}}}, {"maze", {{"width", 9}}}});
  const auto back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_to_json(c)["sampler"]["mutation_prob"], 1.0);
}

TEST(Accounting, ThirtyThousandFullRollouts) {
  RunConfig c;
  const auto plan = plan_run(c);
  EXPECT_EQ(plan.iterations, 30000u);
  EXPECT_EQ(plan.env_steps, 245760000u);
  c.algorithm = Algorithm::paired;
  EXPECT_EQ(plan_run(c).steps_per_iteration, 2u * 256 * 32);
}

TEST(Accounting, TallyFormulas) {
  CycleTally t;
  t.dr_cycles = t.replay_cycles = t.mutation_cycles = 10;
  EXPECT_EQ(env_step_count(Algorithm::accel, t, 256, 32), 245760u);
  CycleTally one;
  one.updates = 1;
  EXPECT_EQ(env_step_count(Algorithm::paired, one, 256, 32), 2u * 256 * 32);
  EXPECT_EQ(env_step_count(Algorithm::dr, one, 256, 32), 256u * 32);
}

TEST(Accounting, BudgetRoundsUpToWholeIterations) {
  RunConfig c;
  c.ppo.num_steps = 10;
  c.ppo.num_envs = 2;
  c.total_env_steps = 41;
  EXPECT_EQ(plan_run(c).iterations, 3u);
  c.total_env_steps = 20;
  EXPECT_EQ(plan_run(c).iterations, 1u);
}
