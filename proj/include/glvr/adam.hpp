#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace glvr {

struct AdamHyper {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Moment estimates for one flat parameter vector.
struct AdamState {
  AdamHyper hyper;
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;

  AdamState() = default;
  AdamState(std::size_t n, AdamHyper h) : hyper(h), m(n, 0.0), v(n, 0.0) {}

  std::size_t size() const { return m.size(); }
  /// Zeroes both moments of coordinate i; the shared step count is kept.
  void reset_coordinate(std::size_t i);
};

/// Bias-corrected Adam step applied in place:
///   m <- b1 m + (1-b1) g,  v <- b2 v + (1-b2) g^2,
///   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
void adam_update(AdamState& state, std::span<const double> grads, std::span<double> params);

}  // namespace glvr
