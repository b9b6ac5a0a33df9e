#pragma once

// Test-only reference computations. Nothing here calls the reverse pass.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "glvr/dense.hpp"
#include "glvr/nets.hpp"

namespace glvr::oracle {

/// Central differences of f at x with step h.
inline std::vector<double> central_difference(const std::function<double(std::span<const double>)>& f,
                                              std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + h;
    const double up = f(x);
    x[i] = orig - h;
    const double down = f(x);
    x[i] = orig;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// max_i |a_i - b_i| / max(max_i |b_i|, floor).
inline double max_relative_error(std::span<const double> a, std::span<const double> b, double floor = 1e-8) {
  double diff = 0.0;
  double scale = floor;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::fabs(a[i] - b[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  return diff / scale;
}

/// Plain forward evaluation written independently of dense.cpp.
inline std::vector<double> reference_forward(const std::vector<DenseLayer>& layers, std::vector<double> v) {
  for (const auto& l : layers) {
    std::vector<double> out(l.out_dim);
    for (std::size_t o = 0; o < l.out_dim; ++o) {
      double s = l.bias[o];
      for (std::size_t i = 0; i < l.in_dim; ++i) s += l.weight[o * l.in_dim + i] * v[i];
      switch (l.activation) {
        case Activation::identity: break;
        case Activation::relu: s = std::max(0.0, s); break;
        case Activation::leaky_relu: s = s > 0 ? s : l.leaky_slope * s; break;
        case Activation::tanh: s = std::tanh(s); break;
        case Activation::sigmoid: s = 1.0 / (1.0 + std::exp(-s)); break;
      }
      out[o] = s;
    }
    v = std::move(out);
  }
  return v;
}

/// All-tanh dense stack with N(0, std^2) weights and biases.
inline Network tanh_net(const std::vector<std::size_t>& dims, unsigned seed, double std = 0.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, std);
  Network net;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    auto l = DenseLayer::zeros(dims[k], dims[k + 1], Activation::tanh);
    for (auto& w : l.weight) w = dist(gen);
    for (auto& b : l.bias) b = dist(gen);
    net.layers.push_back(std::move(l));
  }
  return net;
}

/// Single linear layer G(z) = A z.
inline std::vector<DenseLayer> linear_net(std::size_t out, std::size_t in, const std::vector<double>& a) {
  auto l = DenseLayer::zeros(in, out, Activation::identity);
  l.weight = a;
  return {l};
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("glvr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace glvr::oracle
