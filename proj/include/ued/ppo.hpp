#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ued/nn.hpp"
#include "ued/rollout.hpp"

namespace ued {

struct PpoConfig {
  double gamma = 0.995;
  double gae_lambda = 0.98;
  int num_steps = 256;
  int epochs = 5;
  int minibatches = 1;
  double clip_eps = 0.2;
  int num_envs = 32;
  double lr = 1e-4;
  bool anneal_lr = true;
  double adam_eps = 1e-5;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double max_grad_norm = 0.5;
  bool clip_value = true;
  double vf_coeff = 0.5;
  double ent_coeff = 1e-3;
  int hidden = 32;

  void validate() const {
    if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!(gae_lambda >= 0 && gae_lambda <= 1)) throw std::invalid_argument("gae_lambda must lie in [0, 1]");
    if (num_steps < 1 || num_envs < 1 || epochs < 1) throw std::invalid_argument("num_steps, num_envs, epochs must be positive");
    if (minibatches != 1) throw std::invalid_argument("only one minibatch per epoch is supported");
    if (!(clip_eps > 0)) throw std::invalid_argument("clip_eps must be positive");
    if (!(lr > 0)) throw std::invalid_argument("lr must be positive");
    if (!(adam_eps > 0)) throw std::invalid_argument("adam_eps must be positive");
    if (!(max_grad_norm > 0)) throw std::invalid_argument("max_grad_norm must be positive");
    if (hidden < 1) throw std::invalid_argument("hidden must be positive");
  }
};

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct GaeResult {
  std::vector<S> advantages;
  std::vector<S> targets;
};

/// delta_t = r_t + gamma (1 - done_t) V_{t+1} - V_t
/// A_t     = delta_t + gamma lambda (1 - done_t) A_{t+1}
/// A done flag cuts both the bootstrap and the recursion.
template <class S>
GaeResult<S> compute_gae(const Trajectory<S>& traj, double gamma, double lambda) {
  GaeResult<S> out{std::vector<S>(traj.size()), std::vector<S>(traj.size())};
  const auto g = static_cast<S>(gamma);
  const auto gl = static_cast<S>(gamma * lambda);
  for (std::size_t e = 0; e < traj.num_envs; ++e) {
    S next_value = traj.bootstrap_values[e];
    S next_adv = 0;
    for (std::size_t t = traj.num_steps; t-- > 0;) {
      const std::size_t i = traj.at(t, e);
      const S live = traj.dones[i] ? S(0) : S(1);
      const S delta = traj.rewards[i] + g * live * next_value - traj.values[i];
      next_adv = delta + gl * live * next_adv;
      out.advantages[i] = next_adv;
      out.targets[i] = next_adv + traj.values[i];
      next_value = traj.values[i];
    }
  }
  return out;
}

/// Zero mean, unit (population) variance; a constant batch maps to zeros.
template <class S>
std::vector<S> normalize_advantages(std::span<const S> adv) {
  std::vector<S> out(adv.size());
  if (adv.empty()) return out;
  double mean = 0.0;
  for (auto a : adv) mean += static_cast<double>(a);
  mean /= static_cast<double>(adv.size());
  double var = 0.0;
  for (auto a : adv) var += (static_cast<double>(a) - mean) * (static_cast<double>(a) - mean);
  var /= static_cast<double>(adv.size());
  const double sd = std::sqrt(var);
  for (std::size_t i = 0; i < adv.size(); ++i)
    out[i] = sd > 0.0 ? static_cast<S>((static_cast<double>(adv[i]) - mean) / sd) : S(0);
  return out;
}

/// lr_0 * (1 - u / U) when annealing, where u counts completed updates.
inline double learning_rate(const PpoConfig& cfg, std::uint64_t update, std::uint64_t total_updates) {
  if (!cfg.anneal_lr || total_updates == 0) return cfg.lr;
  const double frac = 1.0 - static_cast<double>(update) / static_cast<double>(total_updates);
  return cfg.lr * std::max(0.0, frac);
}

template <class S>
struct PpoBatch {
  std::size_t size = 0;
  std::span<const S> inputs;
  std::span<const int> actions;
  std::span<const S> old_log_probs;
  std::span<const S> old_values;
  std::span<const S> advantages;  // already normalized
  std::span<const S> targets;
};

struct LossStats {
  double total = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_frac = 0.0;
};

/// Clipped-surrogate loss + vf_coeff * value loss - ent_coeff * entropy,
/// averaged over the batch. When grad is non-empty it receives d(total)/d(weights).
template <class S>
LossStats ppo_loss(const ActorCriticParams<S>& params, const PpoBatch<S>& batch, const PpoConfig& cfg,
                   std::span<double> grad) {
  const std::size_t B = batch.size;
  const auto A = static_cast<std::size_t>(params.shape.actions);
  const auto pass = forward(params, batch.inputs, B);
  const double inv_b = 1.0 / static_cast<double>(B);
  const double eps = cfg.clip_eps;

  std::vector<double> dlogits(B * A), dvalues(B), lp(A), dh(A);
  LossStats st;
  std::size_t clipped = 0;
  for (std::size_t b = 0; b < B; ++b) {
    std::span<const S> z(pass.logits.data() + b * A, A);
    log_softmax<S, double>(z, lp);
    const auto act = static_cast<std::size_t>(batch.actions[b]);
    const double adv = static_cast<double>(batch.advantages[b]);
    const double log_ratio = lp[act] - static_cast<double>(batch.old_log_probs[b]);
    const double ratio = std::exp(log_ratio);
    const double clipped_ratio = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
    const double s1 = ratio * adv, s2 = clipped_ratio * adv;
    st.policy_loss -= std::min(s1, s2) * inv_b;
    // d min(s1, s2) / d ratio
    double dobj = 0.0;
    if (s1 <= s2)
      dobj = adv;
    else if (ratio > 1.0 - eps && ratio < 1.0 + eps)
      dobj = adv;
    if (std::abs(ratio - 1.0) > eps) ++clipped;
    st.approx_kl += ((ratio - 1.0) - log_ratio) * inv_b;

    const double h = categorical_entropy<double>(lp, dh);
    st.entropy += h * inv_b;

    for (std::size_t i = 0; i < A; ++i) {
      const double dlogp = (i == act ? 1.0 : 0.0) - std::exp(lp[i]);
      dlogits[b * A + i] = (-dobj * ratio * dlogp - cfg.ent_coeff * dh[i]) * inv_b;
    }

    const double v = static_cast<double>(pass.values[b]);
    const double old_v = static_cast<double>(batch.old_values[b]);
    const double target = static_cast<double>(batch.targets[b]);
    const double l1 = (v - target) * (v - target);
    double dv = 0.0;
    if (cfg.clip_value) {
      const double vc = old_v + std::clamp(v - old_v, -eps, eps);
      const double l2 = (vc - target) * (vc - target);
      if (l1 >= l2) {
        st.value_loss += 0.5 * l1 * inv_b;
        dv = (v - target);
      } else {
        st.value_loss += 0.5 * l2 * inv_b;
        const bool inside = (v - old_v) > -eps && (v - old_v) < eps;
        dv = inside ? (vc - target) : 0.0;
      }
    } else {
      st.value_loss += 0.5 * l1 * inv_b;
      dv = (v - target);
    }
    dvalues[b] = cfg.vf_coeff * dv * inv_b;
  }
  st.clip_frac = static_cast<double>(clipped) * inv_b;
  st.total = st.policy_loss + cfg.vf_coeff * st.value_loss - cfg.ent_coeff * st.entropy;
  if (!grad.empty()) {
    std::fill(grad.begin(), grad.end(), 0.0);
    backward(params, batch.inputs, pass, dlogits, dvalues, grad);
  }
  return st;
}

/// Scales grad in place so its global L2 norm is at most max_norm; returns the pre-clip norm.
inline double clip_grad_norm(std::span<double> grad, double max_norm) {
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (double& g : grad) g *= scale;
  }
  return norm;
}

/// One Adam step. The bias-correction step index is params.adam_step after increment.
template <class S>
void adam_step(ActorCriticParams<S>& params, std::span<const double> grad, double lr, const PpoConfig& cfg) {
  params.adam_step += 1;
  const double t = static_cast<double>(params.adam_step);
  const double b1 = cfg.adam_beta1, b2 = cfg.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, t), c2 = 1.0 - std::pow(b2, t);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double m = b1 * static_cast<double>(params.adam_m[i]) + (1.0 - b1) * grad[i];
    const double v = b2 * static_cast<double>(params.adam_v[i]) + (1.0 - b2) * grad[i] * grad[i];
    params.adam_m[i] = static_cast<S>(m);
    params.adam_v[i] = static_cast<S>(v);
    const double update = lr * (m / c1) / (std::sqrt(v / c2) + cfg.adam_eps);
    params.weights[i] = static_cast<S>(static_cast<double>(params.weights[i]) - update);
  }
}

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double grad_norm = 0.0;
  double lr = 0.0;
};

/// Epochs of full-batch clipped PPO on one trajectory. Advantages are
/// normalized once per batch. Stats are averaged over epochs.
template <class S>
PpoStats ppo_update(ActorCriticParams<S>& params, const Trajectory<S>& traj, std::span<const S> advantages,
                    std::span<const S> targets, const PpoConfig& cfg, std::uint64_t total_updates) {
  const std::size_t B = traj.size();
  if (advantages.size() != B || targets.size() != B) throw std::invalid_argument("ppo_update: shape mismatch");
  if (static_cast<std::size_t>(params.shape.input) != traj.obs_size)
    throw std::invalid_argument("ppo_update: observation width does not match the network");
  const auto norm_adv = normalize_advantages<S>(advantages);
  const PpoBatch<S> batch{B, traj.observations, traj.actions, traj.log_probs, traj.values, norm_adv, targets};
  const double lr = learning_rate(cfg, params.update_count, total_updates);
  std::vector<double> grad(params.weights.size());
  PpoStats out;
  out.lr = lr;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto st = ppo_loss(params, batch, cfg, grad);
    if (!std::isfinite(st.total)) {
      std::ostringstream msg;
      msg << "non-finite PPO loss at update " << params.update_count << " epoch " << epoch
          << ": policy_loss=" << st.policy_loss << " value_loss=" << st.value_loss << " entropy=" << st.entropy
          << " approx_kl=" << st.approx_kl;
      throw TrainingError(msg.str());
    }
    const double norm = clip_grad_norm(grad, cfg.max_grad_norm);
    if (!std::isfinite(norm)) throw TrainingError("non-finite gradient norm at update " + std::to_string(params.update_count));
    adam_step(params, grad, lr, cfg);
    out.policy_loss += st.policy_loss / cfg.epochs;
    out.value_loss += st.value_loss / cfg.epochs;
    out.entropy += st.entropy / cfg.epochs;
    out.approx_kl += st.approx_kl / cfg.epochs;
    out.grad_norm += norm / cfg.epochs;
  }
  params.update_count += 1;
  return out;
}

}  // namespace ued
