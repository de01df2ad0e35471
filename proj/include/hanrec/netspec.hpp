#pragma once

#include <array>
#include <string>
#include <vector>

#include "hanrec/nn/network.hpp"

namespace hanrec {

enum class LayerKind { Conv, MaxPool, FullyConnected, ReLU, SoftmaxLoss };

// Declarative layer description; only the fields for its kind are read.
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  // conv
  int out_channels = 0, kernel_h = 0, kernel_w = 0, stride = 1, padding = 0;
  // maxpool
  int window = 0, pool_stride = 0;
  // fully connected
  int out_features = 0;

  static LayerSpec conv(int out_c, int k, int stride = 1, int pad = 0) {
    LayerSpec s;
    s.kind = LayerKind::Conv;
    s.out_channels = out_c;
    s.kernel_h = s.kernel_w = k;
    s.stride = stride;
    s.padding = pad;
    return s;
  }
  static LayerSpec maxpool(int window, int stride) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool;
    s.window = window;
    s.pool_stride = stride;
    return s;
  }
  static LayerSpec fc(int out_features) {
    LayerSpec s;
    s.kind = LayerKind::FullyConnected;
    s.out_features = out_features;
    return s;
  }
  static LayerSpec relu() {
    LayerSpec s;
    s.kind = LayerKind::ReLU;
    return s;
  }
};

struct NetworkSpec {
  std::string name;
  std::array<int, 3> input{3, 48, 48};  // C, H, W
  std::vector<LayerSpec> layers;
  int num_classes = 0;
};

// Propagates (C,H,W) through the stack; SpatialUnderflow when a kernel or
// window no longer fits.
inline std::array<int, 3> infer_output(const NetworkSpec& spec,
                                       std::vector<std::array<int, 3>>* trace = nullptr) {
  int c = spec.input[0], h = spec.input[1], w = spec.input[2];
  bool flattened = false;
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::Conv: {
        if (flattened) fail(Errc::ConfigInvalid, "conv after flatten");
        const int oh = h + 2 * l.padding - l.kernel_h;
        const int ow = w + 2 * l.padding - l.kernel_w;
        if (oh < 0 || ow < 0)
          fail(Errc::SpatialUnderflow,
               spec.name + ": " + std::to_string(h) + "x" + std::to_string(w) +
                   " input too small for " + std::to_string(l.kernel_h) + "x" +
                   std::to_string(l.kernel_w) + " kernel");
        h = oh / l.stride + 1;
        w = ow / l.stride + 1;
        c = l.out_channels;
        break;
      }
      case LayerKind::MaxPool: {
        if (flattened) fail(Errc::ConfigInvalid, "pool after flatten");
        if (h < l.window || w < l.window)
          fail(Errc::SpatialUnderflow, spec.name + ": pool window underflow");
        h = (h - l.window) / l.pool_stride + 1;
        w = (w - l.window) / l.pool_stride + 1;
        break;
      }
      case LayerKind::FullyConnected:
        c = l.out_features;
        h = w = 1;
        flattened = true;
        break;
      case LayerKind::ReLU:
      case LayerKind::SoftmaxLoss:
        break;
    }
    if (trace) trace->push_back({c, h, w});
  }
  return {c, h, w};
}

inline size_t parameter_count(const NetworkSpec& spec) {
  size_t total = 0;
  int c = spec.input[0], h = spec.input[1], w = spec.input[2];
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::Conv:
        total += static_cast<size_t>(l.out_channels) * c * l.kernel_h * l.kernel_w +
                 static_cast<size_t>(l.out_channels);
        h = (h + 2 * l.padding - l.kernel_h) / l.stride + 1;
        w = (w + 2 * l.padding - l.kernel_w) / l.stride + 1;
        c = l.out_channels;
        break;
      case LayerKind::MaxPool:
        h = (h - l.window) / l.pool_stride + 1;
        w = (w - l.window) / l.pool_stride + 1;
        break;
      case LayerKind::FullyConnected:
        total += static_cast<size_t>(l.out_features) * c * h * w +
                 static_cast<size_t>(l.out_features);
        c = l.out_features;
        h = w = 1;
        break;
      default:
        break;
    }
  }
  return total;
}

inline Network build_network(const NetworkSpec& spec, uint64_t seed) {
  infer_output(spec);  // validates, throws SpatialUnderflow
  Network net;
  int c = spec.input[0], h = spec.input[1], w = spec.input[2];
  for (const auto& l : spec.layers) {
    switch (l.kind) {
      case LayerKind::Conv:
        net.append(std::make_unique<ConvLayer>(c, l.out_channels, l.kernel_h,
                                               l.kernel_w, l.stride, l.padding));
        h = (h + 2 * l.padding - l.kernel_h) / l.stride + 1;
        w = (w + 2 * l.padding - l.kernel_w) / l.stride + 1;
        c = l.out_channels;
        break;
      case LayerKind::MaxPool:
        net.append(std::make_unique<MaxPoolLayer>(l.window, l.pool_stride));
        h = (h - l.window) / l.pool_stride + 1;
        w = (w - l.window) / l.pool_stride + 1;
        break;
      case LayerKind::FullyConnected:
        net.append(std::make_unique<FullyConnectedLayer>(c * h * w, l.out_features));
        c = l.out_features;
        h = w = 1;
        break;
      case LayerKind::ReLU:
        net.append(std::make_unique<ReluLayer>());
        break;
      case LayerKind::SoftmaxLoss:
        break;  // the head lives on the Network itself
    }
  }
  init_parameters(net, seed);
  return net;
}

// 7 parameterized layers: 3 conv + 2 pool + 2 fc, pools after the second
// and third convolutions. Wide kernels (9/7/5) suit dense character
// strokes; all widths are adjustable, the connectivity pattern is not.
struct Cnn7Widths {
  int c1 = 32, c2 = 64, c3 = 128;
  int k1 = 9, k2 = 7, k3 = 5;
  int fc = 512;
};

inline NetworkSpec build_cnn7(int num_classes, std::array<int, 3> input = {3, 48, 48},
                              Cnn7Widths widths = {}) {
  if (input[1] < 24 || input[2] < 24)
    fail(Errc::SpatialUnderflow, "cnn7 needs input of at least 24x24");
  NetworkSpec spec;
  spec.name = "CNN-7";
  spec.input = input;
  spec.num_classes = num_classes;
  spec.layers = {
      LayerSpec::conv(widths.c1, widths.k1), LayerSpec::relu(),
      LayerSpec::conv(widths.c2, widths.k2), LayerSpec::relu(),
      LayerSpec::maxpool(2, 2),
      LayerSpec::conv(widths.c3, widths.k3), LayerSpec::relu(),
      LayerSpec::maxpool(2, 2),
      LayerSpec::fc(widths.fc), LayerSpec::relu(),
      LayerSpec::fc(num_classes),
  };
  infer_output(spec);  // SpatialUnderflow when the kernel chain cannot fit
  return spec;
}

// 9 parameterized layers: 4 conv + 2 pool + 3 fc with small (<=5) kernels,
// the deeper small-filter design used for English text.
struct Cnn9Widths {
  int c1 = 32, c2 = 64, c3 = 128, c4 = 128;
  int fc1 = 1024, fc2 = 512;
};

inline NetworkSpec build_cnn9(int num_classes, std::array<int, 3> input = {3, 48, 48},
                              Cnn9Widths widths = {}) {
  NetworkSpec spec;
  spec.name = "CNN-9";
  spec.input = input;
  spec.num_classes = num_classes;
  spec.layers = {
      LayerSpec::conv(widths.c1, 5, 1, 2), LayerSpec::relu(),
      LayerSpec::conv(widths.c2, 3, 1, 1), LayerSpec::relu(),
      LayerSpec::maxpool(2, 2),
      LayerSpec::conv(widths.c3, 3, 1, 1), LayerSpec::relu(),
      LayerSpec::conv(widths.c4, 3, 1, 1), LayerSpec::relu(),
      LayerSpec::maxpool(2, 2),
      LayerSpec::fc(widths.fc1), LayerSpec::relu(),
      LayerSpec::fc(widths.fc2), LayerSpec::relu(),
      LayerSpec::fc(num_classes),
  };
  infer_output(spec);
  return spec;
}

inline int parameterized_layer_count(const NetworkSpec& spec) {
  int n = 0;
  for (const auto& l : spec.layers)
    if (l.kind == LayerKind::Conv || l.kind == LayerKind::MaxPool ||
        l.kind == LayerKind::FullyConnected)
      n++;
  return n;
}

}  // namespace hanrec
