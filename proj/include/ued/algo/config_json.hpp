#pragma once

// JSON run configuration. Every section is optional and every key defaults
// to the values in RunConfig; unknown keys are rejected by name.
//
// {
//   "algorithm": "dr" | "plr" | "plr_robust" | "accel" | "paired",
//   "scoring": "maxmc" | "pvl",
//   "total_env_steps": 245760000,
//   "seeds": [0],
//   "out_dir": "runs",
//   "log_interval": 1,
//   "checkpoint_interval": 0,
//   "paired_discounted_returns": false,
//   "maze":      { "width", "height", "max_walls", "max_steps", "view_size", "n_edits", "editor_budget" },
//   "sampler":   { "capacity", "temperature", "staleness_coeff", "prioritization", "replay_prob",
//                  "mutation_prob", "min_fill_ratio", "dedup" },
//   "ppo":       { "gamma", "gae_lambda", "num_steps", "epochs", "minibatches", "clip_eps", "num_envs",
//                  "lr", "anneal_lr", "adam_eps", "max_grad_norm", "clip_value", "vf_coeff",
//                  "ent_coeff", "hidden" },
//   "adversary": { same keys as "ppo" }
// }

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ued/algo/config.hpp"

namespace ued {

namespace detail {

using json = nlohmann::json;

class SectionReader {
 public:
  SectionReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "must be a JSON object");
  }

  template <class T>
  SectionReader& field(const std::string& key, T& out) {
    known_.emplace(key, true);
    if (auto it = obj_.find(key); it != obj_.end()) {
      try {
        out = it->template get<T>();
      } catch (const json::exception& e) {
        throw ConfigError(path(key), e.what());
      }
    }
    return *this;
  }

  SectionReader& custom(const std::string& key, const std::function<void(const json&)>& fn) {
    known_.emplace(key, true);
    if (auto it = obj_.find(key); it != obj_.end()) {
      try {
        fn(*it);
      } catch (const ConfigError&) {
        throw;
      } catch (const json::exception& e) {
        throw ConfigError(path(key), e.what());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(path(key), e.what());
      }
    }
    return *this;
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!known_.count(it.key())) throw ConfigError(path(it.key()), "unknown key");
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  const json& obj_;
  std::string prefix_;
  std::map<std::string, bool> known_;
};

inline void read_ppo(const json& j, const std::string& name, PpoConfig& c) {
  SectionReader r(j, name);
  r.field("gamma", c.gamma)
      .field("gae_lambda", c.gae_lambda)
      .field("num_steps", c.num_steps)
      .field("epochs", c.epochs)
      .field("minibatches", c.minibatches)
      .field("clip_eps", c.clip_eps)
      .field("num_envs", c.num_envs)
      .field("lr", c.lr)
      .field("anneal_lr", c.anneal_lr)
      .field("adam_eps", c.adam_eps)
      .field("max_grad_norm", c.max_grad_norm)
      .field("clip_value", c.clip_value)
      .field("vf_coeff", c.vf_coeff)
      .field("ent_coeff", c.ent_coeff)
      .field("hidden", c.hidden);
  r.reject_unknown();
}

inline json ppo_to_json(const PpoConfig& c) {
  return {{"gamma", c.gamma},         {"gae_lambda", c.gae_lambda}, {"num_steps", c.num_steps},
          {"epochs", c.epochs},       {"minibatches", c.minibatches}, {"clip_eps", c.clip_eps},
          {"num_envs", c.num_envs},   {"lr", c.lr},                 {"anneal_lr", c.anneal_lr},
          {"adam_eps", c.adam_eps},   {"max_grad_norm", c.max_grad_norm}, {"clip_value", c.clip_value},
          {"vf_coeff", c.vf_coeff},   {"ent_coeff", c.ent_coeff},   {"hidden", c.hidden}};
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "dr") return Algorithm::dr;
  if (s == "plr") return Algorithm::plr;
  if (s == "plr_robust") return Algorithm::plr_robust;
  if (s == "accel") return Algorithm::accel;
  if (s == "paired") return Algorithm::paired;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

inline ScoringFunction parse_scoring(const std::string& s) {
  if (s == "maxmc") return ScoringFunction::maxmc;
  if (s == "pvl") return ScoringFunction::pvl;
  throw std::invalid_argument("unknown scoring function '" + s + "'");
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  using detail::json;
  RunConfig c;
  detail::SectionReader root(j, "");
  root.custom("algorithm", [&](const json& v) { c.algorithm = detail::parse_algorithm(v.get<std::string>()); })
      .custom("scoring", [&](const json& v) { c.scoring = detail::parse_scoring(v.get<std::string>()); })
      .field("total_env_steps", c.total_env_steps)
      .field("seeds", c.seeds)
      .field("out_dir", c.out_dir)
      .field("log_interval", c.log_interval)
      .field("checkpoint_interval", c.checkpoint_interval)
      .field("paired_discounted_returns", c.paired_discounted_returns)
      .custom("maze",
              [&](const json& v) {
                detail::SectionReader r(v, "maze");
                r.field("width", c.generator.width)
                    .field("height", c.generator.height)
                    .field("max_walls", c.generator.max_walls)
                    .field("max_steps", c.env.max_steps)
                    .field("view_size", c.env.view_size)
                    .field("n_edits", c.n_edits)
                    .field("editor_budget", c.editor_budget);
                r.reject_unknown();
              })
      .custom("sampler",
              [&](const json& v) {
                detail::SectionReader r(v, "sampler");
                r.field("capacity", c.buffer_capacity)
                    .field("temperature", c.sampler.temperature)
                    .field("staleness_coeff", c.sampler.staleness_coeff)
                    .custom("prioritization",
                            [&](const json& p) {
                              if (p.get<std::string>() != "rank")
                                throw std::invalid_argument("only rank prioritization is supported");
                            })
                    .custom("replay_prob", [&](const json& p) { c.replay_prob = p.get<double>(); })
                    .custom("mutation_prob", [&](const json& p) { c.mutation_prob = p.get<double>(); })
                    .field("min_fill_ratio", c.sampler.min_fill_ratio)
                    .field("dedup", c.sampler.dedup);
                r.reject_unknown();
              })
      .custom("ppo", [&](const json& v) { detail::read_ppo(v, "ppo", c.ppo); })
      .custom("adversary", [&](const json& v) { detail::read_ppo(v, "adversary", c.adversary); });
  root.reject_unknown();
  c.validate();
  c.sampler.replay_prob = replay_variant(c).p;
  return c;
}

/// Parses the file; throws ConfigError naming the offending key.
inline RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("<file>", "cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(j);
}

/// Fully resolved configuration, including derived p and q.
inline nlohmann::json config_to_json(const RunConfig& c) {
  const auto v = replay_variant(c);
  return {{"algorithm", to_string(c.algorithm)},
          {"scoring", to_string(c.scoring)},
          {"total_env_steps", c.total_env_steps},
          {"seeds", c.seeds},
          {"out_dir", c.out_dir},
          {"log_interval", c.log_interval},
          {"checkpoint_interval", c.checkpoint_interval},
          {"paired_discounted_returns", c.paired_discounted_returns},
          {"maze",
           {{"width", c.generator.width},
            {"height", c.generator.height},
            {"max_walls", c.generator.max_walls},
            {"max_steps", c.env.max_steps},
            {"view_size", c.env.view_size},
            {"n_edits", c.n_edits},
            {"editor_budget", c.editor_budget}}},
          {"sampler",
           {{"capacity", c.buffer_capacity},
            {"temperature", c.sampler.temperature},
            {"staleness_coeff", c.sampler.staleness_coeff},
            {"prioritization", "rank"},
            {"replay_prob", v.p},
            {"mutation_prob", v.q},
            {"min_fill_ratio", c.sampler.min_fill_ratio},
            {"dedup", c.sampler.dedup}}},
          {"ppo", detail::ppo_to_json(c.ppo)},
          {"adversary", detail::ppo_to_json(c.adversary)}};
}

}  // namespace ued
