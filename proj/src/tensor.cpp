#include "fedx/tensor.hpp"

#include <sstream>
#include <stdexcept>

namespace fedx {

size_t shape_numel(const std::vector<size_t>& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

static void check_shape(const std::vector<size_t>& s) {
  if (s.empty() || s.size() > 4) {
    throw std::invalid_argument("tensor rank must be 1..4, got " + shape_to_string(s));
  }
  for (size_t d : s) {
    if (d < 1) throw std::invalid_argument("tensor dims must be >= 1, got " + shape_to_string(s));
  }
}

Tensor::Tensor(std::vector<size_t> s) : shape(std::move(s)) {
  check_shape(shape);
  data.assign(shape_numel(shape), 0.0);
}

Tensor::Tensor(std::vector<size_t> s, std::vector<double> d)
    : shape(std::move(s)), data(std::move(d)) {
  check_shape(shape);
  if (shape_numel(shape) != data.size()) {
    throw std::invalid_argument("tensor data length " + std::to_string(data.size()) +
                                " does not match shape " + shape_to_string(shape));
  }
}

std::string shape_to_string(const std::vector<size_t>& shape) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ",";
    os << shape[i];
  }
  os << "]";
  return os.str();
}

}  // namespace fedx
