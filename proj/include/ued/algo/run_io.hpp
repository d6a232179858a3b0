#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ued/algo/config_json.hpp"
#include "ued/algo/run.hpp"
#include "ued/checkpoint.hpp"
#include "ued/maze/buffer_io.hpp"

namespace ued {

namespace fs = std::filesystem;

// A run directory holds everything needed to continue a run bit-exactly:
//   state.json        rng key, tallies, meta-policy node, replay bookkeeping,
//                     live DR env states, metrics.jsonl length at save time
//   *.ckpt            network parameters with optimizer moments
//   buffer.txt        level buffer (replay-based methods)

namespace detail {

inline nlohmann::json tally_json(const CycleTally& t) {
  return {{"dr_cycles", t.dr_cycles}, {"replay_cycles", t.replay_cycles}, {"mutation_cycles", t.mutation_cycles},
          {"updates", t.updates},     {"env_steps", t.env_steps}};
}

inline CycleTally tally_from(const nlohmann::json& j) {
  CycleTally t;
  t.dr_cycles = j.at("dr_cycles").get<std::uint64_t>();
  t.replay_cycles = j.at("replay_cycles").get<std::uint64_t>();
  t.mutation_cycles = j.at("mutation_cycles").get<std::uint64_t>();
  t.updates = j.at("updates").get<std::uint64_t>();
  t.env_steps = j.at("env_steps").get<std::uint64_t>();
  return t;
}

inline std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + p.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  os << text;
}

inline nlohmann::json carry_json(const EnvCarry<DrEnv>& c) {
  const auto& s = c.state.inner;
  return {{"level", maze::format_level(s.level)},
          {"x", s.agent_pos.x},
          {"y", s.agent_pos.y},
          {"dir", static_cast<int>(s.agent_dir)},
          {"t", s.timestep}};
}

inline EnvCarry<DrEnv> carry_from(const nlohmann::json& j, const maze::MazeEnv& env) {
  maze::MazeState s;
  s.level = maze::parse_level(j.at("level").get<std::string>());
  s.agent_pos = {j.at("x").get<int>(), j.at("y").get<int>()};
  s.agent_dir = static_cast<maze::Direction>(j.at("dir").get<int>());
  s.timestep = j.at("t").get<int>();
  auto obs = env.observe(s);
  auto level = s.level;
  return {DrEnv::State{std::move(s), std::move(level)}, std::move(obs)};
}

}  // namespace detail

inline const char* kStateFile = "state.json";
inline const char* kMetricsFile = "metrics.jsonl";

/// Writes checkpoint files and state.json. metrics_bytes is the length of
/// the metrics stream that corresponds to this state.
inline void save_run(const fs::path& dir, const Run& run, std::uint64_t metrics_bytes) {
  fs::create_directories(dir);
  nlohmann::json j;
  j["format"] = "ued-forge run-state v1";
  j["algorithm"] = to_string(run.config().algorithm);
  j["seed"] = run.seed();
  j["metrics_bytes"] = metrics_bytes;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        j["key"] = s.key.value;
        j["tally"] = detail::tally_json(s.tally);
        if constexpr (std::is_same_v<T, DrState>) {
          save_checkpoint((dir / "agent.ckpt").string(), s.agent);
          auto carries = nlohmann::json::array();
          for (const auto& c : s.carries) carries.push_back(detail::carry_json(c));
          j["carries"] = carries;
        } else if constexpr (std::is_same_v<T, ReplayState>) {
          save_checkpoint((dir / "agent.ckpt").string(), s.agent);
          detail::write_text(dir / "buffer.txt", maze::buffer_to_string(s.buffer));
          j["meta_node"] = s.meta.node == MetaNode::A ? "A" : "B";
          j["last_slots"] = s.last_slots;
          j["last_levels"] = maze::format_levels(s.last_levels);
        } else {
          save_checkpoint((dir / "protagonist.ckpt").string(), s.protagonist);
          save_checkpoint((dir / "antagonist.ckpt").string(), s.antagonist);
          save_checkpoint((dir / "adversary.ckpt").string(), s.adversary);
        }
      },
      run.state());
  detail::write_text(dir / kStateFile, j.dump(2) + "\n");
}

struct LoadedRun {
  Run run;
  std::uint64_t metrics_bytes = 0;
};

/// Rebuilds a run saved by save_run. The config must be the one the run was
/// started with.
inline LoadedRun load_run(const fs::path& dir, const RunConfig& config, int threads = 1) {
  const auto j = nlohmann::json::parse(detail::read_text(dir / kStateFile));
  if (j.at("format").get<std::string>() != "ued-forge run-state v1")
    throw std::runtime_error("unrecognised run state in " + dir.string());
  if (j.at("algorithm").get<std::string>() != to_string(config.algorithm))
    throw std::runtime_error("run state in " + dir.string() + " belongs to algorithm " +
                             j.at("algorithm").get<std::string>());
  const auto seed = j.at("seed").get<std::uint64_t>();
  const RngKey key{j.at("key").get<std::uint64_t>()};
  const auto tally = detail::tally_from(j.at("tally"));

  TrainState state;
  if (config.algorithm == Algorithm::dr) {
    DrState s;
    s.agent = load_checkpoint((dir / "agent.ckpt").string());
    const auto env = make_env(config);
    for (const auto& c : j.at("carries")) s.carries.push_back(detail::carry_from(c, env));
    s.tally = tally;
    s.key = key;
    state = std::move(s);
  } else if (config.algorithm == Algorithm::paired) {
    PairedState s;
    s.protagonist = load_checkpoint((dir / "protagonist.ckpt").string());
    s.antagonist = load_checkpoint((dir / "antagonist.ckpt").string());
    s.adversary = load_checkpoint((dir / "adversary.ckpt").string());
    s.tally = tally;
    s.key = key;
    state = std::move(s);
  } else {
    ReplayState s = init_replay(config, seed);
    s.agent = load_checkpoint((dir / "agent.ckpt").string());
    s.buffer = maze::buffer_from_string(detail::read_text(dir / "buffer.txt"));
    s.meta.node = j.at("meta_node").get<std::string>() == "B" ? MetaNode::B : MetaNode::A;
    s.last_slots = j.at("last_slots").get<std::vector<std::size_t>>();
    const auto text = j.at("last_levels").get<std::string>();
    s.last_levels = text.empty() ? std::vector<maze::MazeLevel>{} : maze::parse_levels(text);
    s.tally = tally;
    s.key = key;
    state = std::move(s);
  }
  return {Run(config, seed, std::move(state), threads), j.at("metrics_bytes").get<std::uint64_t>()};
}

}  // namespace ued
