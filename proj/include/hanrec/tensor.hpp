#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "hanrec/error.hpp"

namespace hanrec {

// Dense row-major float32 tensor. All layer math operates on these.
struct Tensor {
  std::vector<int> shape;
  std::vector<float> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(numel_of(shape), 0.f);
  }

  static size_t numel_of(const std::vector<int>& s) {
    size_t n = 1;
    for (int e : s) {
      if (e < 1) fail(Errc::ShapeMismatch, "tensor extents must be >= 1");
      n *= static_cast<size_t>(e);
    }
    return n;
  }

  size_t numel() const { return data.size(); }

  int dim(int i) const { return shape[static_cast<size_t>(i)]; }

  // flat accessors for the common ranks
  float& at2(int i, int j) { return data[static_cast<size_t>(i) * shape[1] + j]; }
  float at2(int i, int j) const { return data[static_cast<size_t>(i) * shape[1] + j]; }

  float& at4(int b, int c, int y, int x) {
    return data[((static_cast<size_t>(b) * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }
  float at4(int b, int c, int y, int x) const {
    return data[((static_cast<size_t>(b) * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  std::string shape_str() const {
    std::string s = "(";
    for (size_t i = 0; i < shape.size(); ++i)
      s += (i ? "," : "") + std::to_string(shape[i]);
    return s + ")";
  }
};

inline void require_shape(const Tensor& t, const std::vector<int>& s,
                          const char* what) {
  if (t.shape != s)
    fail(Errc::ShapeMismatch,
         std::string(what) + ": got " + t.shape_str());
}

}  // namespace hanrec
