#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ued/maze/env.hpp"
#include "ued/maze/shortest_path.hpp"
#include "ued/nn.hpp"
#include "ued/parallel.hpp"
#include "ued/rollout.hpp"

namespace ued {

struct LevelResult {
  std::size_t index = 0;
  int episodes = 0;
  int solved = 0;
  double solve_rate = 0.0;
  double mean_return = 0.0;
  double mean_length = 0.0;
};

struct EvalReport {
  std::vector<LevelResult> levels;
  double mean_solve_rate = 0.0;
  double iqm_solve_rate = 0.0;
};

/// Interquartile mean: drops floor(n/4) values from each end of the sorted
/// sample and averages the rest.
inline double iqm(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t cut = xs.size() / 4;
  double s = 0.0;
  for (std::size_t i = cut; i < xs.size() - cut; ++i) s += xs[i];
  return s / static_cast<double>(xs.size() - 2 * cut);
}

/// Acts from a trained actor-critic network.
class NetworkPolicy {
 public:
  NetworkPolicy(ActorCriticParams<float> params, maze::MazeEnv env, ActionMode mode = ActionMode::greedy)
      : params_(std::move(params)), env_(env), mode_(mode) {
    if (static_cast<std::size_t>(params_.shape.input) != env_.observation_size() ||
        params_.shape.actions != env_.num_actions())
      throw std::invalid_argument("checkpoint does not match the maze observation or action space");
  }

  int act(const maze::MazeState&, const maze::MazeObservation& obs, RngKey key) const {
    detail::PolicyWorkspace<float> ws(params_.shape);
    std::vector<float> x(env_.observation_size());
    env_.encode(obs, std::span<float>(x));
    detail::policy_eval<float>(params_, x, ws);
    return detail::pick_action(ws.log_probs, mode_, key);
  }

 private:
  ActorCriticParams<float> params_;
  maze::MazeEnv env_;
  ActionMode mode_;
};

/// Follows the shortest-path distance field: steps forward when that reduces
/// the distance to the goal, otherwise turns toward a neighbour that does.
class OraclePolicy {
 public:
  int act(const maze::MazeState& s, const maze::MazeObservation&, RngKey) const {
    const auto dist = maze::shortest_path_distances(s.level);
    const int here = dist.at(s.agent_pos);
    auto closer = [&](maze::Direction d) {
      const auto c = s.agent_pos + maze::offset(d);
      return s.level.in_bounds(c) && dist.reachable(c) && dist.at(c) == here - 1;
    };
    if (closer(s.agent_dir)) return static_cast<int>(maze::Action::forward);
    if (closer(maze::turn_left(s.agent_dir))) return static_cast<int>(maze::Action::left);
    return static_cast<int>(maze::Action::right);
  }
};

/// Plays `episodes` episodes on every level; levels are independent and may
/// run on separate threads. Results are reported in input order.
template <class Policy>
EvalReport evaluate(const Policy& policy, const maze::MazeEnv& env, std::span<const maze::MazeLevel> levels,
                    int episodes, RngKey key, int threads = 1) {
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  EvalReport report;
  report.levels.resize(levels.size());
  parallel_chunks(levels.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      LevelResult r;
      r.index = i;
      r.episodes = episodes;
      double ret_sum = 0.0, len_sum = 0.0;
      for (int ep = 0; ep < episodes; ++ep) {
        const RngKey ep_key = fold_in(fold_in(key, i), static_cast<std::uint64_t>(ep));
        auto [k_reset, k_run] = split(ep_key);
        auto cur = env.reset_to_level(levels[i], k_reset);
        auto state = std::move(cur.state);
        auto obs = std::move(cur.observation);
        for (std::uint64_t t = 0;; ++t) {
          const auto [k_act, k_step] = split(fold_in(k_run, t));
          auto step = env.step(state, policy.act(state, obs, k_act), k_step);
          state = std::move(step.state);
          obs = std::move(step.observation);
          if (step.done) {
            ret_sum += step.reward;
            len_sum += static_cast<double>(t + 1);
            if (step.reward > 0.0) ++r.solved;
            break;
          }
        }
      }
      r.solve_rate = static_cast<double>(r.solved) / episodes;
      r.mean_return = ret_sum / episodes;
      r.mean_length = len_sum / episodes;
      report.levels[i] = r;
    }
  });
  std::vector<double> rates;
  for (const auto& r : report.levels) rates.push_back(r.solve_rate);
  double s = 0.0;
  for (double x : rates) s += x;
  report.mean_solve_rate = rates.empty() ? 0.0 : s / static_cast<double>(rates.size());
  report.iqm_solve_rate = iqm(rates);
  return report;
}

inline nlohmann::json to_json(const EvalReport& r) {
  auto levels = nlohmann::json::array();
  for (const auto& l : r.levels)
    levels.push_back({{"index", l.index},
                      {"episodes", l.episodes},
                      {"solved", l.solved},
                      {"solve_rate", l.solve_rate},
                      {"mean_return", l.mean_return},
                      {"mean_length", l.mean_length}});
  return {{"levels", levels}, {"mean_solve_rate", r.mean_solve_rate}, {"iqm_solve_rate", r.iqm_solve_rate}};
}

}  // namespace ued
