#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glvr/adam.hpp"
#include "glvr/datasets.hpp"
#include "glvr/nets.hpp"
#include "glvr/rng.hpp"
#include "glvr/tensor.hpp"

namespace glvr {

/// D outputs are clamped to [kLogClamp, 1 - kLogClamp] inside every log.
inline constexpr double kLogClamp = 1e-7;

struct LabelRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct LabelScheme {
  enum class Variant { hard, soft };

  Variant variant = Variant::hard;
  LabelRange real{0.7, 1.2};
  LabelRange fake{0.0, 0.3};

  static LabelScheme hard() { return {}; }
  static LabelScheme soft() { return {Variant::soft, {0.7, 1.2}, {0.0, 0.3}}; }

  void validate() const;
  /// Hard: exactly 1. Soft: uniform over the real range. Always consumes
  /// nothing from `rng` in the hard case.
  double draw_real(Rng& rng) const;
  double draw_fake(Rng& rng) const;
};

/// d i.i.d. N(0, 1) draws.
std::vector<double> sample_prior(Rng& rng, std::size_t d);

/// p_data / (p_data + p_g).
double optimal_discriminator(double p_data, double p_g);

/// Cross-entropy of a D output against a (possibly soft) target, with the
/// log-argument clamp applied. Writes d loss / d output into `d_output`.
double bce_with_target(double output, double target, double& d_output);

enum class GeneratorLoss { saturating, non_saturating };

/// One discriminator update on m real rows and m fresh fakes; returns the
/// mean loss evaluated before the update.
double discriminator_step(Network& disc, const Network& gen, const Tensor& real_batch, Rng& rng,
                          const LabelScheme& labels, AdamState& adam);

/// One generator update through a frozen discriminator; returns the mean
/// loss evaluated before the update.
double generator_step(Network& gen, const Network& disc, std::size_t batch_size, Rng& rng,
                      GeneratorLoss mode, AdamState& adam);

struct TrainConfig {
  std::uint64_t seed = 0;
  std::size_t latent_dim = 100;
  /// Empty means [latent_dim, 64, 128, data_dim].
  std::vector<std::size_t> generator_dims;
  /// Empty means [data_dim, 128, 64, 1].
  std::vector<std::size_t> discriminator_dims;
  /// Unset means tanh for bounded datasets and identity otherwise.
  std::optional<Activation> generator_output;
  AdamHyper adam{};
  std::size_t batch_size = 64;
  std::size_t steps = 0;
  std::size_t d_steps = 1;
  LabelScheme labels = LabelScheme::hard();
  GeneratorLoss generator_loss = GeneratorLoss::saturating;
  DatasetKind dataset = RingOfGaussians{};

  void validate() const;
};

struct LossRecord {
  std::size_t step = 0;
  double d_loss = 0.0;
  double g_loss = 0.0;
};

struct TrainResult {
  Network generator;
  Network discriminator;
  std::vector<LossRecord> history;
};

/// Called after each completed step with the running record.
using TrainProgress = std::function<void(const LossRecord&)>;

TrainResult train(const TrainConfig& config, const TrainProgress& progress = {});

/// `step,d_loss,g_loss` with shortest round-trip float formatting.
std::string loss_history_csv(const std::vector<LossRecord>& history);

}  // namespace glvr
