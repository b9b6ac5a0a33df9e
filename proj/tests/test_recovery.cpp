#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "glvr/error.hpp"
#include "glvr/recovery.hpp"
#include "oracles.hpp"

using namespace glvr;
using RC = ResampleCriterion;

TEST(ResampleProb, ClosedForms) {
  EXPECT_EQ(resample_prob(RC::hard(2.5), 3.0), 1.0);
  EXPECT_EQ(resample_prob(RC::hard(2.5), 0.0), 0.0);
  EXPECT_EQ(resample_prob(RC::hard(2.5), -3.0), 1.0);
  EXPECT_NEAR(resample_prob(RC::logistic(2, 2), 3.0), 1.0 / (1.0 + std::exp(-2.0)), 1e-12);
  EXPECT_NEAR(resample_prob(RC::logistic(2, 2), 3.0), 0.880797, 1e-6);
  for (double a : {0.5, 2.0, 7.0})
    for (double b : {1.0, 2.5}) {
      EXPECT_NEAR(resample_prob(RC::logistic(a, b), b), 0.5, 1e-12);
      EXPECT_NEAR(resample_prob(RC::logistic(a, b), -b), 0.5, 1e-12);
    }
  EXPECT_NEAR(resample_prob(RC::trunc_normal(2.5), 0.0), std::exp(-3.125), 1e-12);
  EXPECT_NEAR(resample_prob(RC::trunc_normal(2.5), 2.5), 1.0, 1e-12);
  EXPECT_EQ(resample_prob(RC::trunc_normal(2.5), 3.0), 1.0);
  EXPECT_EQ(resample_prob(RC::disabled(), 100.0), 0.0);
}

TEST(ResampleProb, EvenAndMonotoneInMagnitude) {
  const std::vector<RC> all{RC::disabled(), RC::hard(1.5), RC::logistic(3, 2), RC::logistic(1, 3),
                            RC::trunc_normal(2.75), RC::trunc_normal(1.0)};
  for (const auto& c : all) {
    double prev = -1.0;
    for (double z = 0.0; z <= 6.0; z += 0.01) {
      const double p = c.probability(z);
      EXPECT_EQ(p, c.probability(-z));
      EXPECT_GE(p, 0.0);
      EXPECT_LE(p, 1.0);
      EXPECT_GE(p, prev) << c.to_string() << " at " << z;
      prev = p;
    }
  }
}

TEST(ResampleProb, HardIsSteepLogisticLimit) {
  const double c = 2.0;
  for (double z : {0.0, 1.0, 1.9, 2.1, 3.0, -2.5}) {
    EXPECT_NEAR(RC::logistic(1e4, c).probability(z), RC::hard(c).probability(z), 1e-12);
  }
}

TEST(PerStepProb, Examples) {
  for (double e : {1.0, 2.0, 20000.0}) {
    EXPECT_EQ(per_step_prob(0.0, e), 0.0);
    EXPECT_EQ(per_step_prob(1.0, e), 1.0);
  }
  EXPECT_NEAR(per_step_prob(0.5, 2.0), 1.0 - std::pow(2.0, -0.5), 1e-15);
  EXPECT_NEAR(per_step_prob(0.5, 2.0), 0.2928932, 1e-7);
  EXPECT_NEAR(per_step_prob(0.5, 20000.0), 1.0 - std::exp(std::log(0.5) / 20000.0), 1e-15);
  EXPECT_NEAR(per_step_prob(0.5, 20000.0), 3.4657e-5, 1e-9);
  EXPECT_THROW(per_step_prob(0.5, 0.5), ConfigError);
  EXPECT_THROW(per_step_prob(1.5, 2.0), ConfigError);
}

namespace {
// 1 - (1 - q)^E evaluated without cancellation.
double total_from_step(double q, double e) { return -std::expm1(e * std::log1p(-q)); }
}  // namespace

TEST(PerStepProb, RoundTripAndMonotone) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0 - 1e-9);
  for (double e : {1.0, 2.0, 20000.0}) {
    double prev = -1.0;
    for (int k = 0; k <= 1000; ++k) {
      const double p = (1.0 - 1e-9) * k / 1000.0;
      const double q = per_step_prob(p, e);
      EXPECT_GE(q, prev);
      prev = q;
      EXPECT_NEAR(total_from_step(q, e), p, 1e-12);
    }
    for (int k = 0; k < 1000; ++k) {
      const double p = u(gen);
      EXPECT_NEAR(total_from_step(per_step_prob(p, e), e), p, 1e-12);
    }
  }
  EXPECT_DOUBLE_EQ(per_step_prob(0.37, 1.0), 0.37);
}

TEST(Criterion, ParsesValidForms) {
  EXPECT_EQ(RC::parse("disabled"), RC::disabled());
  EXPECT_EQ(RC::parse("hard:2.5"), RC::hard(2.5));
  EXPECT_EQ(RC::parse("logistic:2,2"), RC::logistic(2, 2));
  EXPECT_EQ(RC::parse("truncnorm:2.75"), RC::trunc_normal(2.75));
  EXPECT_EQ(RC::logistic(2, 2).label(), "logistic(2, 2)");
  for (const auto& c : {RC::disabled(), RC::hard(1.5), RC::logistic(0.5, 3), RC::trunc_normal(3.75)})
    EXPECT_EQ(RC::parse(c.to_string()), c);
}

TEST(Criterion, RejectsInvalidForms) {
  for (const char* bad : {"", "hard", "hard:0", "hard:-1", "hard:x", "logistic:2", "logistic:0,2",
                          "logistic:2,2,2", "truncnorm:0", "truncnorm:nan", "clip:1", "disabled:1",
                          "hard:1.5x"}) {
    EXPECT_THROW(RC::parse(bad), ConfigError) << bad;
  }
}

namespace {
std::vector<DenseLayer> identity_net(std::size_t d) {
  std::vector<double> a(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) a[i * d + i] = 1.0;
  return oracle::linear_net(d, d, a);
}
}  // namespace

TEST(Recover, ZeroIterationsReturnsStart) {
  const auto net = identity_net(4);
  const std::vector<double> x{1, 2, 3, 4};
  RecoveryConfig cfg;
  cfg.iterations = 0;
  cfg.seed = 5;
  const auto res = recover(x, net, RC::disabled(), cfg);
  Rng rng(5);
  std::vector<double> z0(4);
  for (auto& v : z0) v = rng.normal();
  EXPECT_EQ(res.z, z0);
  EXPECT_EQ(res.final_loss, l2_sq(x, z0));
}

TEST(Recover, IdentityGeneratorConverges) {
  const auto net = identity_net(8);
  Rng rng(42);
  std::vector<double> z_true(8);
  for (auto& v : z_true) v = rng.normal();
  RecoveryConfig cfg;
  cfg.iterations = 2000;
  cfg.lr = 0.05;
  cfg.seed = 1;
  const auto res = recover(z_true, net, RC::disabled(), cfg);
  EXPECT_LT(reconstruction_error(z_true, res.z), 1e-8);
  for (auto c : res.resample_counts) EXPECT_EQ(c, 0u);
}

TEST(Recover, HardCutoffRedrawsOutlierImmediately) {
  // Zero generator: the gradient vanishes so z only moves by resampling.
  const auto net = oracle::linear_net(2, 3, std::vector<double>(6, 0.0));
  RecoveryConfig cfg;
  cfg.iterations = 1;
  cfg.record_trace = true;
  Rng rng(3);
  const auto res = recover_from(std::vector<double>{0.0, 0.0}, net, RC::hard(2.5), cfg, {3.0, 0.0, -0.5}, rng);
  EXPECT_EQ(res.resample_counts[0], 1u);
  EXPECT_EQ(res.resample_counts[1], 0u);
  EXPECT_EQ(res.resample_counts[2], 0u);
  EXPECT_NE(res.z[0], 3.0);
  EXPECT_EQ(res.z[1], 0.0);
  EXPECT_EQ(res.z[2], -0.5);
  ASSERT_EQ(res.trace.size(), 1u);
  EXPECT_EQ(res.trace[0].resamples, 1u);
}

TEST(Recover, BitDeterministicWithResampling) {
  const auto net = oracle::tanh_net({6, 12, 10}, 3, 1.0);
  Rng rng(8);
  std::vector<double> z(6);
  for (auto& v : z) v = rng.normal();
  const auto x = net_forward(net.layers, z);
  RecoveryConfig cfg;
  cfg.iterations = 500;
  cfg.seed = 21;
  const auto a = recover(x, net.layers, RC::logistic(2, 1), cfg);
  const auto b = recover(x, net.layers, RC::logistic(2, 1), cfg);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.resample_counts, b.resample_counts);
  EXPECT_EQ(a.final_loss, b.final_loss);
  EXPECT_GT(a.total_resamples(), 0u);
}

TEST(Recover, LinearInvertibleLossDecreases) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> n;
  std::vector<double> a(25);
  for (auto& v : a) v = n(gen);
  for (std::size_t i = 0; i < 5; ++i) a[i * 5 + i] += 4.0;
  const auto net = oracle::linear_net(5, 5, a);
  const std::vector<double> x{1, -1, 0.5, 2, 0};
  for (std::size_t iters : {1u, 2u, 10u}) {
    RecoveryConfig cfg;
    cfg.iterations = iters;
    cfg.seed = 9;
    cfg.record_trace = true;
    const auto res = recover(x, net, RC::disabled(), cfg);
    EXPECT_LT(res.final_loss, res.trace.front().loss);
  }
}

TEST(Recover, DimensionMismatch) {
  const auto net = identity_net(4);
  RecoveryConfig cfg;
  cfg.iterations = 1;
  EXPECT_THROW(recover(std::vector<double>{1, 2, 3}, net, RC::disabled(), cfg), DimensionError);
}

TEST(Recover, TraceCsvShape) {
  const auto net = identity_net(2);
  RecoveryConfig cfg;
  cfg.iterations = 3;
  cfg.record_trace = true;
  const auto res = recover(std::vector<double>{1, 1}, net, RC::disabled(), cfg);
  const auto csv = trace_csv(res.trace);
  EXPECT_EQ(csv.rfind("iter,loss,resamples_this_iter\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(ReconstructionError, Examples) {
  const std::vector<double> z{0.3, -1, 2};
  EXPECT_EQ(reconstruction_error(z, z), 0.0);
  std::vector<double> a(100, 0.0), b(100, 0.1);
  EXPECT_NEAR(reconstruction_error(a, b), 0.01, 1e-15);
  EXPECT_DOUBLE_EQ(reconstruction_error(std::vector<double>{1, -1}, std::vector<double>{0, 0}), 1.0);
  EXPECT_THROW(reconstruction_error(std::vector<double>{1}, std::vector<double>{1, 2}), DimensionError);
}
