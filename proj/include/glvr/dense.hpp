#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace glvr {

/// Codes match the checkpoint byte encoding.
enum class Activation : std::uint8_t { identity = 0, relu = 1, leaky_relu = 2, tanh = 3, sigmoid = 4 };

inline constexpr double kDefaultLeakySlope = 0.2;

std::string to_string(Activation act);

/// Fully connected layer: y = act(W x + b), W stored row-major [out_dim x in_dim].
struct DenseLayer {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::vector<double> weight;
  std::vector<double> bias;
  Activation activation = Activation::identity;
  double leaky_slope = kDefaultLeakySlope;

  static DenseLayer zeros(std::size_t in_dim, std::size_t out_dim, Activation act);

  /// Throws DimensionError / ConfigError when sizes or the slope are inconsistent.
  void validate() const;

  bool operator==(const DenseLayer&) const = default;
};

using LayerStack = std::span<const DenseLayer>;

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);

/// Composition of dense_forward over every layer. Chain breaks are reported
/// with the offending layer index.
std::vector<double> net_forward(LayerStack layers, std::span<const double> z);

/// Sum of squared differences (not the mean).
double l2_sq(std::span<const double> x, std::span<const double> y);

/// Intermediate values kept for the backward pass. values[0] is the input,
/// values[k + 1] the output of layer k; pre[k] is layer k's W x + b.
struct ForwardTrace {
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> pre;

  const std::vector<double>& output() const { return values.back(); }
};

ForwardTrace forward_trace(LayerStack layers, std::span<const double> z);

struct LayerGrad {
  std::vector<double> weight;
  std::vector<double> bias;
};

struct BackwardResult {
  std::vector<double> input_grad;
  std::vector<LayerGrad> params;  // empty unless requested
};

/// Reverse pass from dL/d(output) to dL/d(input) and, optionally, to every
/// weight and bias.
BackwardResult backward(LayerStack layers, const ForwardTrace& trace,
                        std::span<const double> upstream, bool want_params);

/// Gradient of l2_sq(target, net(z)) with respect to z.
std::vector<double> grad_z_loss(LayerStack layers, std::span<const double> z,
                                std::span<const double> target);

/// Scalar loss on the network output. Writes dL/d(output) into `d_out`
/// (pre-sized to the output length) and returns L.
using OutputLoss = std::function<double(std::span<const double> out, std::span<double> d_out)>;

struct ParamGradResult {
  double loss = 0.0;
  std::vector<LayerGrad> params;
  std::vector<double> input_grad;
};

ParamGradResult grad_params(LayerStack layers, std::span<const double> z, const OutputLoss& loss);

/// Zero-initialized gradient buffers shaped like `layers`.
std::vector<LayerGrad> zero_grads(LayerStack layers);

/// acc += scale * g, layer by layer.
void accumulate(std::vector<LayerGrad>& acc, const std::vector<LayerGrad>& g, double scale = 1.0);

}  // namespace glvr
