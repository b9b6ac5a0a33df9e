#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glvr/dense.hpp"
#include "glvr/rng.hpp"

namespace glvr {

/// Rule giving the total probability that a latent coordinate should be
/// redrawn from the prior, as a function of |z_i|.
class ResampleCriterion {
 public:
  enum class Kind { disabled, hard, logistic, trunc_normal };

  static ResampleCriterion disabled();
  /// Resample whenever |z_i| > cutoff.
  static ResampleCriterion hard(double cutoff);
  /// 1 / (1 + exp(-steepness (|z_i| - midpoint))).
  static ResampleCriterion logistic(double steepness, double midpoint);
  /// N(a) / N(z_i) inside |z_i| <= a, 1 outside.
  static ResampleCriterion trunc_normal(double cutoff);

  /// Parses `disabled`, `hard:C`, `logistic:A,B`, `truncnorm:A`.
  /// Throws ConfigError on anything else or on invalid parameters.
  static ResampleCriterion parse(std::string_view text);

  Kind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }

  double probability(double z) const;

  /// Command-line form, e.g. "logistic:2,2". parse(to_string()) round-trips.
  std::string to_string() const;
  /// Short name: disabled, hard, logistic, truncnorm.
  std::string name() const;
  /// Parameter list as written after the colon, empty for disabled.
  std::string params() const;
  /// Table label, e.g. "logistic(2, 2)".
  std::string label() const;

  bool operator==(const ResampleCriterion&) const = default;

 private:
  ResampleCriterion(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

  Kind kind_ = Kind::disabled;
  double a_ = 0.0;
  double b_ = 0.0;
};

inline double resample_prob(const ResampleCriterion& criterion, double z) {
  return criterion.probability(z);
}

/// Converts a total probability p over `expected_iters` iterations into a
/// per-iteration probability 1 - (1 - p)^(1/E).
double per_step_prob(double p, double expected_iters);

struct TracePoint {
  std::size_t iter = 0;
  double loss = 0.0;  // loss at the iterate the gradient was taken from
  std::size_t resamples = 0;
};

struct RecoveryConfig {
  std::size_t iterations = 20000;
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  bool record_trace = false;
  /// Zero the Adam moments of a coordinate when it is redrawn.
  bool reset_moments = true;
  /// E in per_step_prob; defaults to `iterations`.
  std::optional<double> expected_iterations;
  /// Called every `progress_every` iterations when both are set.
  std::size_t progress_every = 0;
  std::function<void(const TracePoint&)> on_progress;

  void validate() const;
  double expected() const;
};

struct RecoveryResult {
  std::vector<double> z;
  double final_loss = 0.0;
  std::vector<TracePoint> trace;
  std::vector<std::uint64_t> resample_counts;
  std::uint64_t seed = 0;

  std::uint64_t total_resamples() const;
};

/// Gradient-descent inversion of `generator` at image `x`.
///
/// Draw order on the Rng seeded with cfg.seed: d normals for z(0), then per
/// iteration, for each coordinate i: one uniform threshold, followed by one
/// normal only if coordinate i is redrawn.
RecoveryResult recover(std::span<const double> x, LayerStack generator,
                       const ResampleCriterion& criterion, const RecoveryConfig& cfg);

/// Same loop from a caller-supplied starting point and Rng.
RecoveryResult recover_from(std::span<const double> x, LayerStack generator,
                            const ResampleCriterion& criterion, const RecoveryConfig& cfg,
                            std::vector<double> z0, Rng& rng);

/// ||z_true - z_approx||^2 / |z|.
double reconstruction_error(std::span<const double> z_true, std::span<const double> z_approx);

/// `iter,loss,resamples_this_iter`.
std::string trace_csv(const std::vector<TracePoint>& trace);

}  // namespace glvr
