#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "glvr/dense.hpp"
#include "glvr/rng.hpp"

namespace glvr {

enum class NetKind : std::uint8_t { generator = 0, discriminator = 1 };

inline constexpr double kInitWeightStd = 0.02;

struct NetSpec {
  NetKind kind = NetKind::generator;
  std::vector<std::size_t> layer_dims;
  Activation hidden_activation = Activation::relu;
  Activation output_activation = Activation::tanh;

  /// ReLU hidden layers, tanh output.
  static NetSpec generator(std::vector<std::size_t> dims);
  /// LeakyReLU(0.2) hidden layers, sigmoid output; last dim must be 1.
  static NetSpec discriminator(std::vector<std::size_t> dims);

  void validate() const;
};

/// Desk-scale default generator: 16 -> 64 -> 128 -> 64.
NetSpec default_generator_spec();

struct Network {
  NetKind kind = NetKind::generator;
  std::vector<DenseLayer> layers;
  std::uint64_t seed = 0;  // seed used at init
  std::uint64_t step = 0;  // training steps applied

  std::size_t in_dim() const { return layers.front().in_dim; }
  std::size_t out_dim() const { return layers.back().out_dim; }
  std::size_t parameter_count() const;

  std::vector<double> forward(std::span<const double> z) const { return net_forward(layers, z); }

  /// Parameters in checkpoint order: all weights layer by layer, then all biases.
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> flat);

  bool operator==(const Network&) const = default;
};

/// Flattens gradients in the same order as Network::flat_params.
std::vector<double> flatten(const std::vector<LayerGrad>& grads);

/// Weights i.i.d. N(0, weight_std^2) in layer/row-major order, biases zero.
Network init_net(const NetSpec& spec, Rng& rng, double weight_std = kInitWeightStd);
/// Same, seeding a fresh Rng and recording the seed in the network metadata.
Network init_net(const NetSpec& spec, std::uint64_t seed, double weight_std = kInitWeightStd);

std::vector<std::uint8_t> encode_checkpoint(const Network& net);
Network decode_checkpoint(std::span<const std::uint8_t> bytes);

void save_checkpoint(const Network& net, const std::filesystem::path& path);
Network load_checkpoint(const std::filesystem::path& path);

}  // namespace glvr
