#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "ued/rng.hpp"

namespace ued {

/// flatten(obs) -> dense(hidden) -> tanh -> dense(hidden) -> tanh, then a
/// policy head (logits over actions) and a value head sharing the torso.
struct NetworkShape {
  int input = 0;
  int hidden = 32;
  int actions = 3;

  friend constexpr bool operator==(NetworkShape, NetworkShape) = default;
};

/// Offsets of each tensor in the flat parameter vector.
struct ParamLayout {
  std::size_t w1, b1, w2, b2, wpi, bpi, wv, bv, total;

  explicit ParamLayout(NetworkShape s) {
    const auto in = static_cast<std::size_t>(s.input);
    const auto h = static_cast<std::size_t>(s.hidden);
    const auto a = static_cast<std::size_t>(s.actions);
    w1 = 0;
    b1 = w1 + h * in;
    w2 = b1 + h;
    b2 = w2 + h * h;
    wpi = b2 + h;
    bpi = wpi + a * h;
    wv = bpi + a;
    bv = wv + h;
    total = bv + 1;
  }
};

/// Network weights plus Adam moments, the count of completed PPO updates and
/// the count of optimizer steps (epochs) taken.
template <class Scalar>
struct ActorCriticParams {
  NetworkShape shape;
  std::vector<Scalar> weights;
  std::vector<Scalar> adam_m;
  std::vector<Scalar> adam_v;
  std::uint64_t update_count = 0;
  std::uint64_t adam_step = 0;

  friend bool operator==(const ActorCriticParams&, const ActorCriticParams&) = default;
};

/// Scaled-normal init: torso gain sqrt(2), policy head 0.01, value head 1; zero biases.
template <class Scalar>
ActorCriticParams<Scalar> init_actor_critic(NetworkShape shape, RngKey key) {
  if (shape.input < 1 || shape.hidden < 1 || shape.actions < 1) throw std::invalid_argument("bad network shape");
  const ParamLayout L(shape);
  ActorCriticParams<Scalar> p{shape, std::vector<Scalar>(L.total, Scalar(0)), std::vector<Scalar>(L.total, Scalar(0)),
                              std::vector<Scalar>(L.total, Scalar(0)), 0, 0};
  RngStream rng(key);
  auto fill = [&](std::size_t begin, std::size_t count, int fan_in, double gain) {
    const double scale = gain / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) p.weights[begin + i] = static_cast<Scalar>(rng.normal() * scale);
  };
  const auto h = static_cast<std::size_t>(shape.hidden);
  fill(L.w1, h * static_cast<std::size_t>(shape.input), shape.input, std::sqrt(2.0));
  fill(L.w2, h * h, shape.hidden, std::sqrt(2.0));
  fill(L.wpi, static_cast<std::size_t>(shape.actions) * h, shape.hidden, 0.01);
  fill(L.wv, h, shape.hidden, 1.0);
  return p;
}

// ---------------------------------------------------------------------------
// Layer primitives. Each has a backward that is checked against central
// differences in the tests.
// ---------------------------------------------------------------------------

/// y = W x + b, W row-major (out x in).
template <class S>
void dense_forward(std::span<const S> w, std::span<const S> b, std::span<const S> x, std::span<S> y) {
  const std::size_t in = x.size();
  for (std::size_t o = 0; o < y.size(); ++o) {
    const S* row = w.data() + o * in;
    S acc = b[o];
    for (std::size_t i = 0; i < in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
}

/// dW += dy x^T, db += dy, and dx = W^T dy when dx is non-empty.
template <class S, class G>
void dense_backward(std::span<const S> w, std::span<const S> x, std::span<const G> dy, std::span<G> dw,
                    std::span<G> db, std::span<G> dx) {
  const std::size_t in = x.size();
  const std::size_t out = dy.size();
  for (std::size_t o = 0; o < out; ++o) {
    const G g = dy[o];
    db[o] += g;
    G* drow = dw.data() + o * in;
    for (std::size_t i = 0; i < in; ++i) drow[i] += g * static_cast<G>(x[i]);
  }
  if (!dx.empty()) {
    for (std::size_t i = 0; i < in; ++i) dx[i] = G(0);
    for (std::size_t o = 0; o < out; ++o) {
      const G g = dy[o];
      const S* row = w.data() + o * in;
      for (std::size_t i = 0; i < in; ++i) dx[i] += g * static_cast<G>(row[i]);
    }
  }
}

template <class S>
void tanh_forward(std::span<const S> x, std::span<S> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
}

/// dx = dy * (1 - y^2), given the tanh output y.
template <class S, class G>
void tanh_backward(std::span<const S> y, std::span<const G> dy, std::span<G> dx) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    const G yi = static_cast<G>(y[i]);
    dx[i] = dy[i] * (G(1) - yi * yi);
  }
}

/// Numerically stable log-softmax.
template <class S, class R = S>
void log_softmax(std::span<const S> logits, std::span<R> out) {
  R m = static_cast<R>(logits[0]);
  for (auto v : logits) m = std::max(m, static_cast<R>(v));
  R sum = 0;
  for (auto v : logits) sum += std::exp(static_cast<R>(v) - m);
  const R lse = m + std::log(sum);
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] = static_cast<R>(logits[i]) - lse;
}

/// Entropy of softmax(logits) and its gradient with respect to the logits:
/// dH/dz_i = -p_i (log p_i + H).
template <class R>
R categorical_entropy(std::span<const R> log_probs, std::span<R> grad) {
  R h = 0;
  for (auto lp : log_probs) h -= std::exp(lp) * lp;
  if (!grad.empty())
    for (std::size_t i = 0; i < log_probs.size(); ++i) grad[i] = -std::exp(log_probs[i]) * (log_probs[i] + h);
  return h;
}

// ---------------------------------------------------------------------------
// Whole-network passes over a batch of flattened observations.
// ---------------------------------------------------------------------------

template <class S>
struct ForwardPass {
  std::size_t batch = 0;
  std::vector<S> h1, h2, logits, values;
};

template <class S>
ForwardPass<S> forward(const ActorCriticParams<S>& params, std::span<const S> inputs, std::size_t batch) {
  const NetworkShape& s = params.shape;
  const ParamLayout L(s);
  const auto in = static_cast<std::size_t>(s.input);
  const auto h = static_cast<std::size_t>(s.hidden);
  const auto a = static_cast<std::size_t>(s.actions);
  if (inputs.size() != batch * in) throw std::invalid_argument("forward: observation batch has the wrong shape");
  std::span<const S> w(params.weights);
  ForwardPass<S> out{batch, std::vector<S>(batch * h), std::vector<S>(batch * h), std::vector<S>(batch * a),
                     std::vector<S>(batch)};
  std::vector<S> pre(h);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto x = inputs.subspan(b * in, in);
    std::span<S> h1(out.h1.data() + b * h, h), h2(out.h2.data() + b * h, h);
    dense_forward<S>(w.subspan(L.w1, h * in), w.subspan(L.b1, h), x, pre);
    tanh_forward<S>(pre, h1);
    dense_forward<S>(w.subspan(L.w2, h * h), w.subspan(L.b2, h), h1, pre);
    tanh_forward<S>(pre, h2);
    dense_forward<S>(w.subspan(L.wpi, a * h), w.subspan(L.bpi, a), h2, std::span<S>(out.logits.data() + b * a, a));
    dense_forward<S>(w.subspan(L.wv, h), w.subspan(L.bv, 1), h2, std::span<S>(out.values.data() + b, 1));
  }
  return out;
}

/// Accumulates d(loss)/d(weights) into grad given per-sample gradients with
/// respect to the logits (batch x actions) and values (batch).
template <class S>
void backward(const ActorCriticParams<S>& params, std::span<const S> inputs, const ForwardPass<S>& pass,
              std::span<const double> dlogits, std::span<const double> dvalues, std::span<double> grad) {
  const NetworkShape& s = params.shape;
  const ParamLayout L(s);
  const auto in = static_cast<std::size_t>(s.input);
  const auto h = static_cast<std::size_t>(s.hidden);
  const auto a = static_cast<std::size_t>(s.actions);
  std::span<const S> w(params.weights);
  std::vector<double> dh2(h), dh2_v(h), dpre(h), dh1(h);
  for (std::size_t b = 0; b < pass.batch; ++b) {
    const auto x = inputs.subspan(b * in, in);
    std::span<const S> h1(pass.h1.data() + b * h, h), h2(pass.h2.data() + b * h, h);
    dense_backward<S, double>(w.subspan(L.wpi, a * h), h2, dlogits.subspan(b * a, a), grad.subspan(L.wpi, a * h),
                              grad.subspan(L.bpi, a), dh2);
    dense_backward<S, double>(w.subspan(L.wv, h), h2, dvalues.subspan(b, 1), grad.subspan(L.wv, h),
                              grad.subspan(L.bv, 1), dh2_v);
    for (std::size_t i = 0; i < h; ++i) dh2[i] += dh2_v[i];
    tanh_backward<S, double>(h2, dh2, dpre);
    dense_backward<S, double>(w.subspan(L.w2, h * h), h1, dpre, grad.subspan(L.w2, h * h), grad.subspan(L.b2, h),
                              dh1);
    tanh_backward<S, double>(h1, dh1, dpre);
    dense_backward<S, double>(w.subspan(L.w1, h * in), x, dpre, grad.subspan(L.w1, h * in), grad.subspan(L.b1, h),
                              std::span<double>{});
  }
}

}  // namespace ued
