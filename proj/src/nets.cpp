#include "glvr/nets.hpp"

#include <cmath>
#include <string>

#include "glvr/error.hpp"
#include "glvr/storage.hpp"

namespace glvr {

NetSpec NetSpec::generator(std::vector<std::size_t> dims) {
  return {NetKind::generator, std::move(dims), Activation::relu, Activation::tanh};
}

NetSpec NetSpec::discriminator(std::vector<std::size_t> dims) {
  return {NetKind::discriminator, std::move(dims), Activation::leaky_relu, Activation::sigmoid};
}

NetSpec default_generator_spec() { return NetSpec::generator({16, 64, 128, 64}); }

void NetSpec::validate() const {
  if (layer_dims.size() < 2) throw ConfigError("network spec needs at least two dims");
  for (auto d : layer_dims) {
    if (d == 0) throw ConfigError("network dims must be positive");
  }
  if (kind == NetKind::discriminator && layer_dims.back() != 1) {
    throw DimensionError("discriminator output", 1, layer_dims.back());
  }
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

std::vector<double> Network::flat_params() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  for (const auto& l : layers) flat.insert(flat.end(), l.weight.begin(), l.weight.end());
  for (const auto& l : layers) flat.insert(flat.end(), l.bias.begin(), l.bias.end());
  return flat;
}

void Network::set_flat_params(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw DimensionError("flat parameter vector", parameter_count(), flat.size());
  }
  std::size_t pos = 0;
  for (auto& l : layers) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.weight.size(), l.weight.begin());
    pos += l.weight.size();
  }
  for (auto& l : layers) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), l.bias.size(), l.bias.begin());
    pos += l.bias.size();
  }
}

std::vector<double> flatten(const std::vector<LayerGrad>& grads) {
  std::vector<double> flat;
  for (const auto& g : grads) flat.insert(flat.end(), g.weight.begin(), g.weight.end());
  for (const auto& g : grads) flat.insert(flat.end(), g.bias.begin(), g.bias.end());
  return flat;
}

Network init_net(const NetSpec& spec, Rng& rng, double weight_std) {
  spec.validate();
  Network net;
  net.kind = spec.kind;
  const std::size_t n_layers = spec.layer_dims.size() - 1;
  for (std::size_t k = 0; k < n_layers; ++k) {
    const bool last = k + 1 == n_layers;
    auto layer = DenseLayer::zeros(spec.layer_dims[k], spec.layer_dims[k + 1],
                                   last ? spec.output_activation : spec.hidden_activation);
    for (auto& w : layer.weight) w = weight_std * rng.normal();
    net.layers.push_back(std::move(layer));
  }
  return net;
}

Network init_net(const NetSpec& spec, std::uint64_t seed, double weight_std) {
  Rng rng(seed);
  auto net = init_net(spec, rng, weight_std);
  net.seed = seed;
  return net;
}

namespace {

std::uint8_t activation_code(const DenseLayer& layer) {
  if (layer.activation == Activation::leaky_relu && layer.leaky_slope != kDefaultLeakySlope) {
    throw ConfigError("checkpoint format only stores leaky_relu with slope 0.2");
  }
  return static_cast<std::uint8_t>(layer.activation);
}

}  // namespace

std::vector<std::uint8_t> encode_checkpoint(const Network& net) {
  if (net.layers.empty()) throw ConfigError("cannot save a network with no layers");
  ByteWriter w;
  w.raw(kCheckpointMagic);
  w.u32(kFormatVersion);
  w.u8(static_cast<std::uint8_t>(net.kind));
  w.u32(static_cast<std::uint32_t>(net.layers.size()));
  for (const auto& l : net.layers) {
    l.validate();
    w.u32(static_cast<std::uint32_t>(l.in_dim));
    w.u32(static_cast<std::uint32_t>(l.out_dim));
    w.u8(activation_code(l));
  }
  for (double v : net.flat_params()) w.f64(v);
  w.u64(net.seed);
  w.u64(net.step);
  return std::move(w.bytes());
}

Network decode_checkpoint(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.header(kCheckpointMagic, "GLVR");
  Network net;
  const std::uint8_t kind = r.u8();
  if (kind > 1) throw FormatError(FormatFault::invalid, "unknown network kind " + std::to_string(kind));
  net.kind = static_cast<NetKind>(kind);
  const std::uint32_t layer_count = r.u32();
  if (layer_count == 0) throw FormatError(FormatFault::inconsistent, "checkpoint has no layers");
  r.require(std::size_t{layer_count} * 9, "layer table");
  std::size_t param_count = 0;
  for (std::uint32_t k = 0; k < layer_count; ++k) {
    const std::uint32_t in = r.u32();
    const std::uint32_t out = r.u32();
    const std::uint8_t code = r.u8();
    if (code > 4) throw FormatError(FormatFault::invalid, "unknown activation code " + std::to_string(code));
    if (in == 0 || out == 0) throw FormatError(FormatFault::inconsistent, "zero layer dimension");
    if (!net.layers.empty() && net.layers.back().out_dim != in) {
      throw FormatError(FormatFault::inconsistent,
                        "layer " + std::to_string(k) + " input " + std::to_string(in) +
                            " does not match previous output " + std::to_string(net.layers.back().out_dim));
    }
    const std::size_t layer_params = std::size_t{in} * out + out;
    if (layer_params > (std::size_t{1} << 58) ||
        (param_count += layer_params) > (std::size_t{1} << 58)) {
      throw FormatError(FormatFault::truncated, "parameters: layer table describes an impossible size");
    }
    r.require(param_count * 8 + 16, "parameters and metadata");
    net.layers.push_back(DenseLayer::zeros(in, out, static_cast<Activation>(code)));
  }
  if (net.kind == NetKind::discriminator && net.layers.back().out_dim != 1) {
    throw FormatError(FormatFault::inconsistent, "discriminator output dimension must be 1");
  }
  r.require(param_count * 8 + 16, "parameters and metadata");
  std::vector<double> flat(param_count);
  for (auto& v : flat) v = r.f64();
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (!std::isfinite(flat[i])) {
      throw FormatError(FormatFault::invalid, "parameter " + std::to_string(i) + " is not finite");
    }
  }
  net.set_flat_params(flat);
  net.seed = r.u64();
  net.step = r.u64();
  if (r.remaining() != 0) {
    throw FormatError(FormatFault::inconsistent,
                      std::to_string(r.remaining()) + " trailing bytes after checkpoint");
  }
  return net;
}

void save_checkpoint(const Network& net, const std::filesystem::path& path) {
  write_file_atomic(path, encode_checkpoint(net));
}

Network load_checkpoint(const std::filesystem::path& path) { return decode_checkpoint(read_file(path)); }

}  // namespace glvr
