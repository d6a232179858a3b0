#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "ued/ppo.hpp"

namespace ued {

/// One line of the JSON-lines metrics stream.
struct MetricsRecord {
  std::uint64_t iteration = 0;
  std::uint64_t env_steps = 0;
  std::uint64_t updates = 0;
  std::string cycle_type;  // dr | replay | mutation | paired
  double mean_return = 0.0;
  double solve_rate = 0.0;
  std::uint64_t episodes = 0;
  std::uint64_t buffer_size = 0;
  double mean_buffer_score = 0.0;
  std::optional<PpoStats> losses;  // absent for cycles without a student update
  // PAIRED only
  std::optional<double> mean_regret;
  std::optional<PpoStats> adversary_losses;
  std::optional<PpoStats> antagonist_losses;
};

namespace detail {
inline nlohmann::json stats_json(const PpoStats& s) {
  return {{"policy_loss", s.policy_loss}, {"value_loss", s.value_loss}, {"entropy", s.entropy},
          {"approx_kl", s.approx_kl},     {"grad_norm", s.grad_norm},   {"lr", s.lr}};
}
}  // namespace detail

inline nlohmann::json to_json(const MetricsRecord& r) {
  nlohmann::json j = {{"iteration", r.iteration},
                      {"env_steps", r.env_steps},
                      {"updates", r.updates},
                      {"cycle_type", r.cycle_type},
                      {"mean_return", r.mean_return},
                      {"solve_rate", r.solve_rate},
                      {"episodes", r.episodes},
                      {"buffer_size", r.buffer_size},
                      {"mean_buffer_score", r.mean_buffer_score}};
  j["losses"] = r.losses ? detail::stats_json(*r.losses) : nlohmann::json(nullptr);
  j["entropy"] = r.losses ? nlohmann::json(r.losses->entropy) : nlohmann::json(nullptr);
  if (r.mean_regret) j["mean_regret"] = *r.mean_regret;
  if (r.adversary_losses) j["adversary_losses"] = detail::stats_json(*r.adversary_losses);
  if (r.antagonist_losses) j["antagonist_losses"] = detail::stats_json(*r.antagonist_losses);
  return j;
}

inline std::string to_json_line(const MetricsRecord& r) { return to_json(r).dump() + "\n"; }

}  // namespace ued
