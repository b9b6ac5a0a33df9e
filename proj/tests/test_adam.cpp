#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glvr/adam.hpp"
#include "glvr/error.hpp"

using namespace glvr;

TEST(Adam, FirstStepIsBoundedBySignedLr) {
  const AdamHyper h{0.01, 0.9, 0.999, 1e-8};
  const std::vector<double> g{3.0, -1e-3, 1e-9, -50.0};
  std::vector<double> p(4, 1.0);
  AdamState s(4, h);
  adam_update(s, g, p);
  for (std::size_t i = 0; i < 4; ++i) {
    const double delta = p[i] - 1.0;
    EXPECT_EQ(std::signbit(delta), !std::signbit(g[i]));
    const double mag = std::fabs(delta);
    const double ag = std::fabs(g[i]);
    EXPECT_LE(mag, h.lr * (1.0 + 1e-12));
    EXPECT_GE(mag, h.lr * ag / (ag + h.eps) * (1.0 - 1e-12));
  }
}

TEST(Adam, ZeroGradientLeavesParams) {
  std::vector<double> p{0.5, -2.0};
  const auto orig = p;
  AdamState s(2, AdamHyper{});
  for (int i = 0; i < 100; ++i) adam_update(s, std::vector<double>{0.0, 0.0}, p);
  EXPECT_EQ(p, orig);
}

TEST(Adam, ZeroLearningRateLeavesParams) {
  std::vector<double> p{0.5, -2.0};
  const auto orig = p;
  AdamState s(2, AdamHyper{0.0, 0.5, 0.999, 1e-8});
  for (int i = 0; i < 10; ++i) adam_update(s, std::vector<double>{1.0, -3.0}, p);
  EXPECT_EQ(p, orig);
}

TEST(Adam, BlockSplitInvariance) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n;
  const std::size_t dim = 10, split = 4;
  std::vector<double> whole(dim), left(split), right(dim - split);
  for (std::size_t i = 0; i < dim; ++i) whole[i] = n(gen);
  std::copy(whole.begin(), whole.begin() + split, left.begin());
  std::copy(whole.begin() + split, whole.end(), right.begin());
  AdamState sw(dim, AdamHyper{}), sl(split, AdamHyper{}), sr(dim - split, AdamHyper{});
  for (int step = 0; step < 20; ++step) {
    std::vector<double> g(dim);
    for (auto& v : g) v = n(gen);
    adam_update(sw, g, whole);
    adam_update(sl, std::span(g).first(split), left);
    adam_update(sr, std::span(g).subspan(split), right);
  }
  for (std::size_t i = 0; i < split; ++i) EXPECT_EQ(whole[i], left[i]);
  for (std::size_t i = split; i < dim; ++i) EXPECT_EQ(whole[i], right[i - split]);
}

TEST(Adam, ShapeMismatchThrows) {
  AdamState s(3, AdamHyper{});
  std::vector<double> p(3);
  EXPECT_THROW(adam_update(s, std::vector<double>(2), p), DimensionError);
  std::vector<double> q(4);
  EXPECT_THROW(adam_update(s, std::vector<double>(4), q), DimensionError);
}

TEST(Adam, SecondMomentNonNegativeAndResettable) {
  AdamState s(2, AdamHyper{});
  std::vector<double> p(2);
  adam_update(s, std::vector<double>{-4.0, 2.0}, p);
  EXPECT_GT(s.v[0], 0.0);
  EXPECT_GT(s.v[1], 0.0);
  s.reset_coordinate(0);
  EXPECT_EQ(s.m[0], 0.0);
  EXPECT_EQ(s.v[0], 0.0);
  EXPECT_NE(s.m[1], 0.0);
  EXPECT_EQ(s.t, 1u);
}
