#include "glvr/datasets.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "glvr/error.hpp"

namespace glvr {

namespace {
template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;
}  // namespace

SyntheticDataset::SyntheticDataset(DatasetKind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const RingOfGaussians& r) {
                   if (r.modes == 0) throw ConfigError("ring dataset needs at least one mode");
                   if (!(r.sigma >= 0.0) || !std::isfinite(r.radius)) {
                     throw ConfigError("ring dataset needs finite radius and sigma >= 0");
                   }
                 },
                 [](const Checkerboard& c) {
                   if (c.cells == 0) throw ConfigError("checkerboard needs at least one cell");
                 },
                 [](const ProceduralTiles& t) {
                   if (t.side == 0) throw ConfigError("tile side must be positive");
                 },
             },
             kind_);
}

std::size_t SyntheticDataset::sample_dim() const {
  return std::visit(overloaded{
                        [](const RingOfGaussians&) -> std::size_t { return 2; },
                        [](const Checkerboard&) -> std::size_t { return 2; },
                        [](const ProceduralTiles& t) -> std::size_t { return t.side * t.side; },
                    },
                    kind_);
}

bool SyntheticDataset::bounded() const { return !std::holds_alternative<RingOfGaussians>(kind_); }

std::string SyntheticDataset::name() const {
  return std::visit(overloaded{
                        [](const RingOfGaussians&) { return std::string("ring"); },
                        [](const Checkerboard&) { return std::string("checkerboard"); },
                        [](const ProceduralTiles&) { return std::string("tiles"); },
                    },
                    kind_);
}

void SyntheticDataset::sample_into(Rng& rng, std::span<double> out) const {
  if (out.size() != sample_dim()) throw DimensionError("dataset sample", sample_dim(), out.size());
  std::visit(overloaded{
                 [&](const RingOfGaussians& r) {
                   const auto mode = rng.below(r.modes);
                   const double angle = 2.0 * std::numbers::pi * static_cast<double>(mode) /
                                        static_cast<double>(r.modes);
                   const double nx = rng.normal();
                   const double ny = rng.normal();
                   out[0] = r.radius * std::cos(angle) + r.sigma * nx;
                   out[1] = r.radius * std::sin(angle) + r.sigma * ny;
                 },
                 [&](const Checkerboard& c) {
                   // Dark cells are those with (row + col) even.
                   const std::size_t dark = (c.cells * c.cells + 1) / 2;
                   const std::size_t pick = rng.below(dark);
                   const std::size_t row = (2 * pick) / c.cells;
                   const std::size_t col = (2 * pick) % c.cells + (row % 2 == 1 && c.cells % 2 == 0 ? 1 : 0);
                   const double width = 2.0 / static_cast<double>(c.cells);
                   out[0] = -1.0 + width * (static_cast<double>(col) + rng.uniform());
                   out[1] = -1.0 + width * (static_cast<double>(row) + rng.uniform());
                 },
                 [&](const ProceduralTiles& t) {
                   const double theta = rng.uniform(0.0, std::numbers::pi);
                   const double freq = rng.uniform(0.5, 2.0);
                   const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
                   const double amp = rng.uniform(0.5, 1.0);
                   const double side = static_cast<double>(t.side);
                   for (std::size_t r = 0; r < t.side; ++r) {
                     for (std::size_t col = 0; col < t.side; ++col) {
                       const double u = (static_cast<double>(col) * std::cos(theta) +
                                         static_cast<double>(r) * std::sin(theta)) / side;
                       out[r * t.side + col] = amp * std::sin(2.0 * std::numbers::pi * freq * u + phase);
                     }
                   }
                 },
             },
             kind_);
}

std::vector<double> SyntheticDataset::sample(Rng& rng) const {
  std::vector<double> v(sample_dim());
  sample_into(rng, v);
  return v;
}

Tensor SyntheticDataset::batch(Rng& rng, std::size_t n) const {
  const std::size_t dim = sample_dim();
  std::vector<double> data(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    sample_into(rng, std::span<double>(data).subspan(i * dim, dim));
  }
  return Tensor({n, dim}, std::move(data));
}

std::vector<std::vector<double>> ring_modes(const RingOfGaussians& ring) {
  std::vector<std::vector<double>> modes;
  for (std::size_t k = 0; k < ring.modes; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(ring.modes);
    modes.push_back({ring.radius * std::cos(angle), ring.radius * std::sin(angle)});
  }
  return modes;
}

double mean_nearest_mode_distance(const Tensor& points, const RingOfGaussians& ring) {
  if (points.rank() != 2 || points.dim(1) != 2) {
    throw DimensionError("ring distance needs [n x 2] points", 2, points.rank() == 2 ? points.dim(1) : points.rank());
  }
  const auto modes = ring_modes(ring);
  const std::size_t n = points.dim(0);
  if (n == 0) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = points.row(i);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : modes) best = std::min(best, std::hypot(p[0] - m[0], p[1] - m[1]));
    total += best;
  }
  return total / static_cast<double>(n);
}

}  // namespace glvr
