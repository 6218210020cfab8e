#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fedx {

// Dense row-major tensor of 64-bit floats, rank 1..4. The universal value
// carrier for batches, activations and relevance maps. Shapes follow
// (N, C, H, W) for image data and (N, F) for feature data.
struct Tensor {
  std::vector<size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<size_t> s);
  Tensor(std::vector<size_t> s, std::vector<double> d);

  size_t numel() const { return data.size(); }
  size_t rank() const { return shape.size(); }

  size_t dim(size_t i) const { return shape.at(i); }

  // Flat index helpers for the two ranks the engine uses.
  size_t idx2(size_t n, size_t f) const { return n * shape[1] + f; }
  size_t idx4(size_t n, size_t c, size_t h, size_t w) const {
    return ((n * shape[1] + c) * shape[2] + h) * shape[3] + w;
  }

  double& at2(size_t n, size_t f) { return data[idx2(n, f)]; }
  double at2(size_t n, size_t f) const { return data[idx2(n, f)]; }
  double& at4(size_t n, size_t c, size_t h, size_t w) { return data[idx4(n, c, h, w)]; }
  double at4(size_t n, size_t c, size_t h, size_t w) const { return data[idx4(n, c, h, w)]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
};

std::string shape_to_string(const std::vector<size_t>& shape);
size_t shape_numel(const std::vector<size_t>& shape);

}  // namespace fedx
