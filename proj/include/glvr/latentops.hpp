#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "glvr/dense.hpp"

namespace glvr {

/// Coordinate unit vector e_i, 1-based index.
std::vector<double> unit_vector(std::size_t i, std::size_t d);

struct EmbedImages {
  std::vector<double> first;     // G(e_i)
  std::vector<double> second;    // G(e_j)
  std::vector<double> composed;  // G(e_i + e_j)
};

EmbedImages embed_compose(LayerStack generator, std::size_t i, std::size_t j);

inline constexpr double kCollinearSin = 1e-9;

/// Spherical interpolation; falls back to linear when sin(theta) < 1e-9.
/// Zero-norm or antipodal inputs throw.
std::vector<double> slerp(std::span<const double> z1, std::span<const double> z2, double mu);

enum class PathMode { slerp, great_circle };

std::string to_string(PathMode mode);

struct InterpolationPath {
  PathMode mode = PathMode::slerp;
  std::size_t steps = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> points;
};

/// `steps` points at mu = k / (steps - 1).
InterpolationPath slerp_path(std::span<const double> z1, std::span<const double> z2,
                             std::size_t steps);

/// Closed loop p_k = cos(2 pi k / steps) z + sin(2 pi k / steps) |z| w for k < steps.
/// `w` must be a unit vector orthogonal to z.
InterpolationPath great_circle(std::span<const double> z, std::span<const double> w,
                               std::size_t steps);

/// Same, with w drawn from a seeded normal vector, Gram-Schmidt against z.
InterpolationPath great_circle(std::span<const double> z, std::size_t steps, std::uint64_t seed);

std::vector<double> orthogonal_direction(std::span<const double> z, std::uint64_t seed);

double norm2(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
/// Angle between two nonzero vectors via a clamped arccos.
double angle_between(std::span<const double> a, std::span<const double> b);

}  // namespace glvr
