#include <gtest/gtest.h>

#include "gradcheck.hpp"

using namespace ued;
using test::max_fd_error;
using test::random_vector;

namespace {
constexpr double kTol = 1e-4;
}

TEST(Layers, DenseGradients) {
  RngStream rng(make_key(1));
  const std::size_t in = 7, out = 5;
  auto w = random_vector(rng, in * out), b = random_vector(rng, out), x = random_vector(rng, in);
  const auto c = random_vector(rng, out);
  auto loss = [&] {
    std::vector<double> y(out);
    dense_forward<double>(w, b, x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < out; ++i) s += c[i] * y[i];
    return s;
  };
  std::vector<double> dw(in * out, 0.0), db(out, 0.0), dx(in, 0.0);
  dense_backward<double, double>(w, x, c, dw, db, dx);
  EXPECT_LT(max_fd_error(w, loss, dw), kTol);
  EXPECT_LT(max_fd_error(b, loss, db), kTol);
  EXPECT_LT(max_fd_error(x, loss, dx), kTol);
}

TEST(Layers, DenseBackwardAccumulates) {
  const std::vector<double> w{1, 2}, x{3, 4}, dy{1};
  std::vector<double> dw{10, 10}, db{1}, dx;
  dense_backward<double, double>(w, x, dy, dw, db, dx);
  EXPECT_EQ(dw, (std::vector<double>{13, 14}));
  EXPECT_EQ(db[0], 2.0);
}

TEST(Layers, TanhGradients) {
  RngStream rng(make_key(2));
  auto x = random_vector(rng, 9);
  const auto c = random_vector(rng, 9);
  auto loss = [&] {
    std::vector<double> y(x.size());
    tanh_forward<double>(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += c[i] * y[i];
    return s;
  };
  std::vector<double> y(x.size()), dx(x.size());
  tanh_forward<double>(x, y);
  tanh_backward<double, double>(y, c, dx);
  EXPECT_LT(max_fd_error(x, loss, dx), kTol);
}

TEST(Layers, LogSoftmaxIsStable) {
  const std::vector<double> z{1000.0, 1001.0, 999.0};
  std::vector<double> lp(3);
  log_softmax<double, double>(z, lp);
  double s = 0.0;
  for (double v : lp) s += std::exp(v);
  EXPECT_NEAR(s, 1.0, 1e-12);
  EXPECT_NEAR(lp[1] - lp[0], 1.0, 1e-12);
}

TEST(Layers, EntropyGradient) {
  RngStream rng(make_key(3));
  auto z = random_vector(rng, 4, 2.0);
  auto entropy = [&] {
    std::vector<double> lp(z.size()), g;
    log_softmax<double, double>(z, lp);
    return categorical_entropy<double>(lp, g);
  };
  std::vector<double> lp(z.size()), g(z.size());
  log_softmax<double, double>(z, lp);
  const double h = categorical_entropy<double>(lp, g);
  EXPECT_GT(h, 0.0);
  EXPECT_LT(max_fd_error(z, entropy, g), kTol);
}

TEST(Layers, UniformEntropyIsLogN) {
  const std::vector<double> lp(3, -std::log(3.0));
  std::vector<double> g;
  EXPECT_NEAR(categorical_entropy<double>(lp, g), std::log(3.0), 1e-12);
}

TEST(Network, FullBackwardMatchesFiniteDifferences) {
  for (std::uint64_t k = 0; k < 5; ++k) {
    RngStream rng(make_key(k));
    const NetworkShape shape{6, 8, 3};
    auto p = init_actor_critic<double>(shape, make_key(k + 10));
    const std::size_t batch = 4;
    const auto x = random_vector(rng, batch * 6);
    const auto cl = random_vector(rng, batch * 3), cv = random_vector(rng, batch);
    auto loss = [&] {
      const auto pass = forward(p, std::span<const double>(x), batch);
      double s = 0.0;
      for (std::size_t i = 0; i < cl.size(); ++i) s += cl[i] * pass.logits[i];
      for (std::size_t i = 0; i < batch; ++i) s += cv[i] * pass.values[i];
      return s;
    };
    const auto pass = forward(p, std::span<const double>(x), batch);
    std::vector<double> grad(p.weights.size(), 0.0);
    backward(p, std::span<const double>(x), pass, cl, cv, grad);
    EXPECT_LT(max_fd_error(p.weights, loss, grad), kTol);
  }
}

TEST(Network, InitIsDeterministicAndScaled) {
  const NetworkShape shape{79, 32, 3};
  const auto a = init_actor_critic<float>(shape, make_key(0));
  const auto b = init_actor_critic<float>(shape, make_key(0));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.weights.size(), ParamLayout(shape).total);
  const ParamLayout L(shape);
  for (std::size_t i = L.b1; i < L.w2; ++i) EXPECT_EQ(a.weights[i], 0.0f);
  double sq = 0.0;
  for (std::size_t i = L.wpi; i < L.bpi; ++i) sq += a.weights[i] * a.weights[i];
  EXPECT_LT(std::sqrt(sq / static_cast<double>(L.bpi - L.wpi)), 0.01);
  EXPECT_THROW(init_actor_critic<float>({0, 32, 3}, make_key(0)), std::invalid_argument);
}

TEST(Network, ParamCountForMazeStudent) {
  // 79*32 + 32 + 32*32 + 32 + 3*32 + 3 + 32 + 1
  EXPECT_EQ(ParamLayout({79, 32, 3}).total, 3748u);
}
