#include "glvr/tensor.hpp"

#include <cmath>
#include <string>

#include "glvr/error.hpp"

namespace glvr {

std::size_t shape_product(std::span<const std::size_t> shape) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  const std::size_t expected = shape_product(shape_);
  if (expected != data_.size()) throw DimensionError("tensor data length", expected, data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw NumericError("tensor element " + std::to_string(i) + " is not finite");
    }
  }
}

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  const std::size_t n = shape_product(shape);
  return Tensor(std::move(shape), std::vector<double>(n, 0.0));
}

Tensor Tensor::vector(std::vector<double> data) {
  const std::size_t n = data.size();
  return Tensor({n}, std::move(data));
}

std::span<const double> Tensor::row(std::size_t r) const {
  if (rank() != 2) throw DimensionError("row access needs rank", 2, rank());
  if (r >= shape_[0]) throw DimensionError("row index bound", shape_[0], r);
  return std::span<const double>(data_).subspan(r * shape_[1], shape_[1]);
}

}  // namespace glvr
