#include "glvr/adam.hpp"

#include <cmath>

#include "glvr/error.hpp"

namespace glvr {

void AdamState::reset_coordinate(std::size_t i) {
  m.at(i) = 0.0;
  v.at(i) = 0.0;
}

void adam_update(AdamState& state, std::span<const double> grads, std::span<double> params) {
  if (grads.size() != state.size()) throw DimensionError("adam gradient", state.size(), grads.size());
  if (params.size() != state.size()) throw DimensionError("adam parameters", state.size(), params.size());
  const auto& h = state.hyper;
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double correction1 = 1.0 - std::pow(h.beta1, t);
  const double correction2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
    state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
    const double m_hat = state.m[i] / correction1;
    const double v_hat = state.v[i] / correction2;
    params[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.eps);
  }
}

}  // namespace glvr
