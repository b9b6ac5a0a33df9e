#include "glvr/dense.hpp"

#include <cmath>

#include "glvr/error.hpp"

namespace glvr {

namespace {

double activate(Activation act, double slope, double x) {
  switch (act) {
    case Activation::identity: return x;
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::leaky_relu: return x > 0.0 ? x : slope * x;
    case Activation::tanh: return std::tanh(x);
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-x));
  }
  return x;
}

// d act / d pre, from the pre-activation and the activated value.
double activate_grad(Activation act, double slope, double pre, double out) {
  switch (act) {
    case Activation::identity: return 1.0;
    case Activation::relu: return pre > 0.0 ? 1.0 : 0.0;
    case Activation::leaky_relu: return pre > 0.0 ? 1.0 : slope;
    case Activation::tanh: return 1.0 - out * out;
    case Activation::sigmoid: return out * (1.0 - out);
  }
  return 1.0;
}

void affine(const DenseLayer& layer, std::span<const double> x, std::vector<double>& pre) {
  pre.assign(layer.bias.begin(), layer.bias.end());
  const double* w = layer.weight.data();
  for (std::size_t o = 0; o < layer.out_dim; ++o) {
    double acc = 0.0;
    const double* row = w + o * layer.in_dim;
    for (std::size_t i = 0; i < layer.in_dim; ++i) acc += row[i] * x[i];
    pre[o] += acc;
  }
}

void check_chain(LayerStack layers, std::size_t input_dim) {
  if (layers.empty()) throw ConfigError("network has no layers");
  std::size_t dim = input_dim;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (layers[k].in_dim != dim) {
      throw DimensionError("layer " + std::to_string(k) + " input", layers[k].in_dim, dim);
    }
    dim = layers[k].out_dim;
  }
}

}  // namespace

std::string to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::leaky_relu: return "leaky_relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "unknown";
}

DenseLayer DenseLayer::zeros(std::size_t in_dim, std::size_t out_dim, Activation act) {
  DenseLayer layer;
  layer.in_dim = in_dim;
  layer.out_dim = out_dim;
  layer.weight.assign(in_dim * out_dim, 0.0);
  layer.bias.assign(out_dim, 0.0);
  layer.activation = act;
  return layer;
}

void DenseLayer::validate() const {
  if (in_dim == 0 || out_dim == 0) throw ConfigError("dense layer dimensions must be positive");
  if (weight.size() != in_dim * out_dim) throw DimensionError("weight size", in_dim * out_dim, weight.size());
  if (bias.size() != out_dim) throw DimensionError("bias size", out_dim, bias.size());
  if (activation == Activation::leaky_relu && !(leaky_slope > 0.0 && leaky_slope < 1.0)) {
    throw ConfigError("leaky_relu slope must lie in (0, 1)");
  }
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
  if (x.size() != layer.in_dim) throw DimensionError("dense input", layer.in_dim, x.size());
  std::vector<double> y;
  affine(layer, x, y);
  for (auto& v : y) v = activate(layer.activation, layer.leaky_slope, v);
  return y;
}

std::vector<double> net_forward(LayerStack layers, std::span<const double> z) {
  check_chain(layers, z.size());
  std::vector<double> cur(z.begin(), z.end());
  for (const auto& layer : layers) cur = dense_forward(layer, cur);
  return cur;
}

double l2_sq(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("l2_sq operands", x.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

ForwardTrace forward_trace(LayerStack layers, std::span<const double> z) {
  check_chain(layers, z.size());
  ForwardTrace trace;
  trace.values.reserve(layers.size() + 1);
  trace.pre.resize(layers.size());
  trace.values.emplace_back(z.begin(), z.end());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    const auto& layer = layers[k];
    affine(layer, trace.values.back(), trace.pre[k]);
    std::vector<double> out(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
      out[o] = activate(layer.activation, layer.leaky_slope, trace.pre[k][o]);
    }
    trace.values.push_back(std::move(out));
  }
  return trace;
}

BackwardResult backward(LayerStack layers, const ForwardTrace& trace,
                        std::span<const double> upstream, bool want_params) {
  if (trace.values.size() != layers.size() + 1) {
    throw DimensionError("forward trace depth", layers.size() + 1, trace.values.size());
  }
  if (upstream.size() != layers.back().out_dim) {
    throw DimensionError("upstream gradient", layers.back().out_dim, upstream.size());
  }
  BackwardResult result;
  if (want_params) result.params.resize(layers.size());

  std::vector<double> grad_out(upstream.begin(), upstream.end());
  std::vector<double> delta;
  for (std::size_t k = layers.size(); k-- > 0;) {
    const auto& layer = layers[k];
    const auto& pre = trace.pre[k];
    const auto& out = trace.values[k + 1];
    const auto& in = trace.values[k];

    delta.resize(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
      delta[o] = grad_out[o] * activate_grad(layer.activation, layer.leaky_slope, pre[o], out[o]);
    }

    if (want_params) {
      auto& g = result.params[k];
      g.bias = delta;
      g.weight.resize(layer.weight.size());
      for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double* row = g.weight.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) row[i] = delta[o] * in[i];
      }
    }

    std::vector<double> grad_in(layer.in_dim, 0.0);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
      const double d = delta[o];
      if (d == 0.0) continue;
      const double* row = layer.weight.data() + o * layer.in_dim;
      for (std::size_t i = 0; i < layer.in_dim; ++i) grad_in[i] += row[i] * d;
    }
    grad_out = std::move(grad_in);
  }
  result.input_grad = std::move(grad_out);
  return result;
}

std::vector<double> grad_z_loss(LayerStack layers, std::span<const double> z,
                                std::span<const double> target) {
  const auto trace = forward_trace(layers, z);
  const auto& out = trace.output();
  if (out.size() != target.size()) throw DimensionError("loss target", out.size(), target.size());
  std::vector<double> upstream(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) upstream[j] = 2.0 * (out[j] - target[j]);
  return backward(layers, trace, upstream, false).input_grad;
}

ParamGradResult grad_params(LayerStack layers, std::span<const double> z, const OutputLoss& loss) {
  const auto trace = forward_trace(layers, z);
  std::vector<double> upstream(trace.output().size(), 0.0);
  ParamGradResult result;
  result.loss = loss(trace.output(), upstream);
  auto back = backward(layers, trace, upstream, true);
  result.params = std::move(back.params);
  result.input_grad = std::move(back.input_grad);
  return result;
}

std::vector<LayerGrad> zero_grads(LayerStack layers) {
  std::vector<LayerGrad> grads(layers.size());
  for (std::size_t k = 0; k < layers.size(); ++k) {
    grads[k].weight.assign(layers[k].weight.size(), 0.0);
    grads[k].bias.assign(layers[k].bias.size(), 0.0);
  }
  return grads;
}

void accumulate(std::vector<LayerGrad>& acc, const std::vector<LayerGrad>& g, double scale) {
  if (acc.size() != g.size()) throw DimensionError("gradient layer count", acc.size(), g.size());
  for (std::size_t k = 0; k < acc.size(); ++k) {
    if (acc[k].weight.size() != g[k].weight.size()) {
      throw DimensionError("gradient weight size", acc[k].weight.size(), g[k].weight.size());
    }
    for (std::size_t i = 0; i < g[k].weight.size(); ++i) acc[k].weight[i] += scale * g[k].weight[i];
    for (std::size_t i = 0; i < g[k].bias.size(); ++i) acc[k].bias[i] += scale * g[k].bias[i];
  }
}

}  // namespace glvr
