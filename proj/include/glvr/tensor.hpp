#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace glvr {

/// Row-major dense array of doubles with an explicit shape.
///
/// Construction checks that the shape matches the data length and that every
/// element is finite, so any Tensor that exists satisfies both invariants.
class Tensor {
 public:
  Tensor() = default;
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor vector(std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }

  std::span<const double> values() const { return data_; }
  const std::vector<double>& data() const { return data_; }

  /// Row `r` of a rank-2 tensor.
  std::span<const double> row(std::size_t r) const;

  bool operator==(const Tensor&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t shape_product(std::span<const std::size_t> shape);

}  // namespace glvr
