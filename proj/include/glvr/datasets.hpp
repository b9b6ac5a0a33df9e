#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "glvr/rng.hpp"
#include "glvr/tensor.hpp"

namespace glvr {

struct RingOfGaussians {
  std::size_t modes = 8;
  double radius = 2.0;
  double sigma = 0.05;
};

/// 2-D points uniform over the dark cells of a `cells` x `cells` board on [-1, 1]^2.
struct Checkerboard {
  std::size_t cells = 4;
};

/// side x side grayscale oriented sinusoidal gratings, values in [-1, 1].
struct ProceduralTiles {
  std::size_t side = 8;
};

using DatasetKind = std::variant<RingOfGaussians, Checkerboard, ProceduralTiles>;

class SyntheticDataset {
 public:
  explicit SyntheticDataset(DatasetKind kind);

  std::size_t sample_dim() const;
  /// True for variants whose samples live in [-1, 1].
  bool bounded() const;
  const DatasetKind& kind() const { return kind_; }
  std::string name() const;

  void sample_into(Rng& rng, std::span<double> out) const;
  std::vector<double> sample(Rng& rng) const;
  /// Rank-2 tensor [n x sample_dim].
  Tensor batch(Rng& rng, std::size_t n) const;

 private:
  DatasetKind kind_;
};

/// Mode centers of a ring, mode k at angle 2 pi k / modes.
std::vector<std::vector<double>> ring_modes(const RingOfGaussians& ring);

/// Mean Euclidean distance from each row of `points` to its closest ring mode.
double mean_nearest_mode_distance(const Tensor& points, const RingOfGaussians& ring);

}  // namespace glvr
