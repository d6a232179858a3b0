#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ued/level_sampler.hpp"
#include "ued/maze/env.hpp"
#include "ued/maze/generate.hpp"
#include "ued/ppo.hpp"

namespace ued {

enum class Algorithm { dr, plr, plr_robust, accel, paired };
enum class ScoringFunction { pvl, maxmc };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::dr:
      return "dr";
    case Algorithm::plr:
      return "plr";
    case Algorithm::plr_robust:
      return "plr_robust";
    case Algorithm::accel:
      return "accel";
    case Algorithm::paired:
      return "paired";
  }
  return "?";
}

inline const char* to_string(ScoringFunction s) { return s == ScoringFunction::pvl ? "pvl" : "maxmc"; }

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what) : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

inline PpoConfig default_adversary_ppo() {
  PpoConfig c;
  c.ent_coeff = 5e-2;
  return c;
}

struct RunConfig {
  Algorithm algorithm = Algorithm::dr;
  ScoringFunction scoring = ScoringFunction::maxmc;
  std::uint64_t total_env_steps = 245'760'000;
  std::vector<std::uint64_t> seeds{0};
  std::string out_dir = "runs";
  int log_interval = 1;          // cycles between metrics lines
  int checkpoint_interval = 0;   // cycles between resumable checkpoints, 0 = final only

  maze::GeneratorParams generator;  // width, height, max_walls
  maze::MazeParams env;             // max_steps, view_size
  int n_edits = 20;
  int editor_budget = 20;

  std::size_t buffer_capacity = 4000;
  SamplerConfig sampler;
  std::optional<double> replay_prob;    // unset: 0.5 for PLR variants, 0.8 for ACCEL
  std::optional<double> mutation_prob;  // unset: 1 for ACCEL, else 0

  PpoConfig ppo;
  PpoConfig adversary = default_adversary_ppo();
  bool paired_discounted_returns = false;

  void validate() const {
    auto wrap = [](const std::string& key, auto&& fn) {
      try {
        fn();
      } catch (const ConfigError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key, e.what());
      }
    };
    if (total_env_steps == 0) throw ConfigError("total_env_steps", "must be positive");
    if (seeds.empty()) throw ConfigError("seeds", "must list at least one seed");
    if (log_interval < 1) throw ConfigError("log_interval", "must be positive");
    if (checkpoint_interval < 0) throw ConfigError("checkpoint_interval", "must be non-negative");
    if (generator.width < 2 || generator.height < 2) throw ConfigError("maze.width", "maze must be at least 2x2");
    if (generator.max_walls < 0 || generator.max_walls >= generator.width * generator.height - 2)
      throw ConfigError("maze.max_walls", "must lie in [0, width*height - 2)");
    wrap("maze", [&] { maze::MazeEnv check(env); });
    if (n_edits < 0) throw ConfigError("maze.n_edits", "must be non-negative");
    if (editor_budget < 1) throw ConfigError("maze.editor_budget", "must be positive");
    if (buffer_capacity < 1) throw ConfigError("sampler.capacity", "must be positive");
    wrap("sampler", [&] { sampler.validate(); });
    if (replay_prob && !(*replay_prob >= 0 && *replay_prob <= 1)) throw ConfigError("sampler.replay_prob", "must lie in [0, 1]");
    if (mutation_prob && !(*mutation_prob >= 0 && *mutation_prob <= 1))
      throw ConfigError("sampler.mutation_prob", "must lie in [0, 1]");
    wrap("ppo", [&] { ppo.validate(); });
    wrap("adversary", [&] { adversary.validate(); });
  }
};

/// The (p, q, robust) triple that distinguishes PLR, robust PLR and ACCEL.
struct ReplayVariant {
  double p = 0.5;
  double q = 0.0;
  bool robust = false;
};

inline ReplayVariant replay_variant(const RunConfig& c) {
  ReplayVariant v;
  v.robust = c.algorithm == Algorithm::plr_robust || c.algorithm == Algorithm::accel;
  v.p = c.replay_prob.value_or(c.algorithm == Algorithm::accel ? 0.8 : 0.5);
  v.q = c.mutation_prob.value_or(c.algorithm == Algorithm::accel ? 1.0 : 0.0);
  return v;
}

inline bool is_replay_based(Algorithm a) {
  return a == Algorithm::plr || a == Algorithm::plr_robust || a == Algorithm::accel;
}

}  // namespace ued
