#include "glvr/latentops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "glvr/error.hpp"
#include "glvr/rng.hpp"

namespace glvr {

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot operands", a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double angle_between(std::span<const double> a, std::span<const double> b) {
  const double na = norm2(a);
  const double nb = norm2(b);
  if (na == 0.0 || nb == 0.0) throw ConfigError("angle undefined for a zero-norm vector");
  return std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
}

std::vector<double> unit_vector(std::size_t i, std::size_t d) {
  if (i < 1 || i > d) {
    throw ConfigError("unit vector index " + std::to_string(i) + " outside [1, " + std::to_string(d) + "]");
  }
  std::vector<double> e(d, 0.0);
  e[i - 1] = 1.0;
  return e;
}

EmbedImages embed_compose(LayerStack generator, std::size_t i, std::size_t j) {
  if (generator.empty()) throw ConfigError("generator has no layers");
  const std::size_t d = generator.front().in_dim;
  const auto ei = unit_vector(i, d);
  const auto ej = unit_vector(j, d);
  std::vector<double> sum(d);
  for (std::size_t k = 0; k < d; ++k) sum[k] = ei[k] + ej[k];
  return {net_forward(generator, ei), net_forward(generator, ej), net_forward(generator, sum)};
}

std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double mu) {
  if (z1.size() != z2.size()) throw DimensionError("slerp endpoints", z1.size(), z2.size());
  const double n1 = norm2(z1), n2 = norm2(z2);
  if (n1 == 0.0 || n2 == 0.0) throw ConfigError("slerp endpoint has zero norm");
  // sin(theta) from the orthogonal residual keeps precision near 0 and pi.
  double c = 0.0, s2 = 0.0;
  for (std::size_t k = 0; k < z1.size(); ++k) c += (z1[k] / n1) * (z2[k] / n2);
  c = std::clamp(c, -1.0, 1.0);
  for (std::size_t k = 0; k < z1.size(); ++k) {
    const double r = z2[k] / n2 - c * (z1[k] / n1);
    s2 += r * r;
  }
  const double s = std::sqrt(s2);
  const double theta = std::atan2(s, c);
  std::vector<double> out(z1.size());
  if (s < kCollinearSin) {
    if (theta > std::numbers::pi / 2) throw ConfigError("slerp between antipodal vectors is undefined");
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (1.0 - mu) * z1[k] + mu * z2[k];
    return out;
  }
  const double c1 = std::sin((1.0 - mu) * theta) / s;
  const double c2 = std::sin(mu * theta) / s;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = c1 * z1[k] + c2 * z2[k];
  return out;
}

std::string to_string(PathMode mode) { return mode == PathMode::slerp ? "slerp" : "great_circle"; }

InterpolationPath slerp_path(std::span<const double> z1, std::span<const double> z2, std::size_t steps) {
  if (steps < 2) throw ConfigError("interpolation needs at least 2 steps");
  InterpolationPath path{PathMode::slerp, steps, 0, {}};
  for (std::size_t k = 0; k < steps; ++k) {
    path.points.push_back(slerp(z1, z2, static_cast<double>(k) / static_cast<double>(steps - 1)));
  }
  // Exact endpoints.
  path.points.front().assign(z1.begin(), z1.end());
  path.points.back().assign(z2.begin(), z2.end());
  return path;
}

InterpolationPath great_circle(std::span<const double> z, std::span<const double> w, std::size_t steps) {
  if (steps < 2) throw ConfigError("great circle needs at least 2 steps");
  if (z.size() != w.size()) throw DimensionError("great circle direction", z.size(), w.size());
  const double r = norm2(z);
  if (r == 0.0) throw ConfigError("great circle through a zero-norm vector is undefined");
  if (std::fabs(norm2(w) - 1.0) > 1e-9 || std::fabs(dot(z, w)) > 1e-9 * r) {
    throw ConfigError("great circle direction must be a unit vector orthogonal to z");
  }
  InterpolationPath path{PathMode::great_circle, steps, 0, {}};
  for (std::size_t k = 0; k < steps; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps);
    const double c = k == 0 ? 1.0 : std::cos(angle);
    const double s = k == 0 ? 0.0 : std::sin(angle);
    std::vector<double> p(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) p[i] = c * z[i] + s * r * w[i];
    path.points.push_back(std::move(p));
  }
  return path;
}

std::vector<double> orthogonal_direction(std::span<const double> z, std::uint64_t seed) {
  const double r = norm2(z);
  if (r == 0.0) throw ConfigError("no orthogonal direction for a zero-norm vector");
  if (z.size() < 2) throw ConfigError("no orthogonal direction in one dimension");
  Rng rng(seed);
  for (;;) {
    std::vector<double> w(z.size());
    for (auto& v : w) v = rng.normal();
    const double proj = dot(w, z) / (r * r);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * z[i];
    // Second pass tightens orthogonality lost to rounding.
    const double proj2 = dot(w, z) / (r * r);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj2 * z[i];
    const double n = norm2(w);
    if (n > 1e-8) {
      for (auto& v : w) v /= n;
      return w;
    }
  }
}

InterpolationPath great_circle(std::span<const double> z, std::size_t steps, std::uint64_t seed) {
  const auto w = orthogonal_direction(z, seed);
  auto path = great_circle(z, w, steps);
  path.seed = seed;
  return path;
}

}  // namespace glvr
