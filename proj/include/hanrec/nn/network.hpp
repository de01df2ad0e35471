#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hanrec/nn/layers.hpp"
#include "hanrec/rng.hpp"
#include "hanrec/tensor.hpp"

namespace hanrec {

// Ordered layer stack plus the softmax cross-entropy head. One control
// thread owns the parameters; forward/backward are deterministic.
class Network {
 public:
  Network() = default;

  void append(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  std::vector<std::unique_ptr<Layer>>& layers() { return layers_; }
  const std::vector<std::unique_ptr<Layer>>& layers() const { return layers_; }

  Tensor forward(const Tensor& x, bool cache = false) {
    Tensor cur = x;
    Tensor next;
    for (auto& layer : layers_) {
      layer->forward(cur, next, cache);
      cur = std::move(next);
    }
    return cur;
  }

  double loss(const Tensor& x, const std::vector<int>& labels) {
    Tensor logits = forward(x, /*cache=*/true);
    return head_.forward(logits, labels);
  }

  // Backpropagates from the head; returns the input gradient.
  Tensor backward() {
    Tensor g = head_.backward();
    Tensor gx;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      (*it)->backward(g, gx);
      g = std::move(gx);
    }
    return g;
  }

  const SoftmaxCrossEntropy& head() const { return head_; }

  std::vector<ParamTensor> parameters() {
    std::vector<ParamTensor> out;
    for (size_t i = 0; i < layers_.size(); ++i)
      for (ParamTensor p : layers_[i]->params()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "layer%02zu.%s", i, p.name.c_str());
        p.name = buf;
        out.push_back(p);
      }
    return out;
  }

  size_t parameter_count() {
    size_t n = 0;
    for (const auto& p : parameters()) n += p.value->numel();
    return n;
  }

  // v <- momentum*v + grad + weight_decay*param; param <- param - lr*v
  void sgd_step(double lr, double momentum, double weight_decay) {
    for (auto& p : parameters()) {
      float* value = p.value->data.data();
      float* grad = p.grad->data.data();
      float* vel = p.velocity->data.data();
      const size_t n = p.value->numel();
      for (size_t i = 0; i < n; ++i) {
        const double v = momentum * static_cast<double>(vel[i]) +
                         static_cast<double>(grad[i]) +
                         weight_decay * static_cast<double>(value[i]);
        vel[i] = static_cast<float>(v);
        value[i] = static_cast<float>(static_cast<double>(value[i]) - lr * v);
      }
    }
  }

  // float64-accumulation evaluation of the same function, for the checker
  double loss_acc64(const Tensor& x, const std::vector<int>& labels) const {
    std::vector<double> cur(x.data.begin(), x.data.end());
    std::vector<int> shape = x.shape;
    std::vector<double> next;
    std::vector<int> next_shape;
    for (const auto& layer : layers_) {
      layer->forward_acc64(cur, shape, next, next_shape);
      cur.swap(next);
      shape.swap(next_shape);
    }
    if (shape.size() != 2) fail(Errc::ShapeMismatch, "head expects (B,K)");
    return SoftmaxCrossEntropy::loss_acc64(cur, shape[0], shape[1], labels);
  }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
  SoftmaxCrossEntropy head_;
};

// Kaiming-style init: w ~ N(0, sqrt(2/fan_in)), biases zero. Layer i draws
// from its own (seed, i) stream so the stack layout does not shift draws.
inline void init_parameters(Network& net, uint64_t seed) {
  size_t li = 0;
  for (auto& layer : net.layers()) {
    Rng rng = Rng::stream(seed, li++);
    for (auto& p : layer->params()) {
      if (p.name.find('w') == std::string::npos) {
        std::fill(p.value->data.begin(), p.value->data.end(), 0.f);
        continue;
      }
      size_t fan_in = 1;
      for (size_t d = 1; d < p.value->shape.size(); ++d)
        fan_in *= static_cast<size_t>(p.value->shape[d]);
      const double std_dev = std::sqrt(2.0 / static_cast<double>(fan_in));
      for (auto& v : p.value->data)
        v = static_cast<float>(std_dev * rng.normal());
    }
  }
}

}  // namespace hanrec
