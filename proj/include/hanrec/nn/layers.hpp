#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "hanrec/nn/gemm.hpp"
#include "hanrec/tensor.hpp"

namespace hanrec {

struct ParamTensor {
  std::string name;
  Tensor* value;
  Tensor* grad;
  Tensor* velocity;
};

// Stack layer. forward(cache=true) stores whatever backward needs; backward
// overwrites the parameter gradients (reductions run in fixed sample order).
// The acc64 path re-evaluates the same function with float64 accumulation
// and is used only by the gradient checker.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual std::string kind() const = 0;
  virtual std::vector<int> output_shape(const std::vector<int>& in) const = 0;
  virtual void forward(const Tensor& x, Tensor& y, bool cache) = 0;
  virtual void backward(const Tensor& gy, Tensor& gx) = 0;
  virtual std::vector<ParamTensor> params() { return {}; }
  virtual void forward_acc64(const std::vector<double>& x,
                             const std::vector<int>& xshape,
                             std::vector<double>& y,
                             std::vector<int>& yshape) const = 0;
};

// ---------------------------------------------------------------------------

inline int conv_out_extent(int in, int k, int stride, int pad) {
  return (in + 2 * pad - k) / stride + 1;
}

class ConvLayer : public Layer {
 public:
  ConvLayer(int in_c, int out_c, int kh, int kw, int stride, int pad)
      : in_c_(in_c), out_c_(out_c), kh_(kh), kw_(kw), stride_(stride), pad_(pad),
        w(Tensor({out_c, in_c, kh, kw})), b(Tensor({out_c})),
        gw(Tensor({out_c, in_c, kh, kw})), gb(Tensor({out_c})),
        vw(Tensor({out_c, in_c, kh, kw})), vb(Tensor({out_c})) {
    if (kh < 1 || kw < 1 || stride < 1 || pad < 0)
      fail(Errc::ConfigInvalid, "bad conv geometry");
  }

  std::string kind() const override { return "conv"; }

  std::vector<int> output_shape(const std::vector<int>& in) const override {
    if (in.size() != 4 || in[1] != in_c_)
      fail(Errc::ShapeMismatch, "conv expects (B," + std::to_string(in_c_) + ",H,W)");
    if (in[2] + 2 * pad_ < kh_ || in[3] + 2 * pad_ < kw_)
      fail(Errc::ShapeMismatch, "conv kernel exceeds padded input");
    return {in[0], out_c_, conv_out_extent(in[2], kh_, stride_, pad_),
            conv_out_extent(in[3], kw_, stride_, pad_)};
  }

  void forward(const Tensor& x, Tensor& y, bool cache) override {
    const auto ys = output_shape(x.shape);
    y = Tensor(ys);
    const int B = x.shape[0], H = x.shape[2], W = x.shape[3];
    const int OH = ys[2], OW = ys[3];
    const int K = in_c_ * kh_ * kw_, P = OH * OW;
    col_.assign(static_cast<size_t>(K) * P, 0.f);
    for (int bi = 0; bi < B; ++bi) {
      im2col(&x.data[static_cast<size_t>(bi) * in_c_ * H * W], H, W, OH, OW);
      float* out = &y.data[static_cast<size_t>(bi) * out_c_ * P];
      for (int o = 0; o < out_c_; ++o)
        for (int p = 0; p < P; ++p) out[static_cast<size_t>(o) * P + p] = b.data[o];
      gemm_ab(out_c_, P, K, w.data.data(), col_.data(), out);
    }
    if (cache) x_cache_ = x;
  }

  void backward(const Tensor& gy, Tensor& gx) override {
    const Tensor& x = x_cache_;
    const auto ys = output_shape(x.shape);
    require_shape(gy, ys, "conv grad_out");
    const int B = x.shape[0], H = x.shape[2], W = x.shape[3];
    const int OH = ys[2], OW = ys[3];
    const int K = in_c_ * kh_ * kw_, P = OH * OW;

    gx = Tensor(x.shape);
    std::fill(gw.data.begin(), gw.data.end(), 0.f);
    std::fill(gb.data.begin(), gb.data.end(), 0.f);
    col_.assign(static_cast<size_t>(K) * P, 0.f);
    gcol_.assign(static_cast<size_t>(K) * P, 0.f);

    for (int bi = 0; bi < B; ++bi) {
      const float* go = &gy.data[static_cast<size_t>(bi) * out_c_ * P];
      // bias: plain sums in scan order
      for (int o = 0; o < out_c_; ++o) {
        float s = 0.f;
        for (int p = 0; p < P; ++p) s += go[static_cast<size_t>(o) * P + p];
        gb.data[o] += s;
      }
      // weights: gw += go * col^T, input recolumnized per sample
      im2col(&x.data[static_cast<size_t>(bi) * in_c_ * H * W], H, W, OH, OW);
      gemm_abt(out_c_, K, P, go, col_.data(), gw.data.data());
      // data: gcol = w^T * go, scattered back
      std::fill(gcol_.begin(), gcol_.end(), 0.f);
      gemm_atb(K, P, out_c_, w.data.data(), go, gcol_.data());
      col2im(&gx.data[static_cast<size_t>(bi) * in_c_ * H * W], H, W, OH, OW);
    }
  }

  std::vector<ParamTensor> params() override {
    return {{"w", &w, &gw, &vw}, {"b", &b, &gb, &vb}};
  }

  void forward_acc64(const std::vector<double>& x, const std::vector<int>& xs,
                     std::vector<double>& y, std::vector<int>& ys) const override {
    const int B = xs[0], H = xs[2], W = xs[3];
    const int OH = conv_out_extent(H, kh_, stride_, pad_);
    const int OW = conv_out_extent(W, kw_, stride_, pad_);
    ys = {B, out_c_, OH, OW};
    y.assign(static_cast<size_t>(B) * out_c_ * OH * OW, 0.0);
    for (int bi = 0; bi < B; ++bi)
      for (int o = 0; o < out_c_; ++o)
        for (int oy = 0; oy < OH; ++oy)
          for (int ox = 0; ox < OW; ++ox) {
            double acc = b.data[o];
            for (int ci = 0; ci < in_c_; ++ci)
              for (int u = 0; u < kh_; ++u)
                for (int v = 0; v < kw_; ++v) {
                  const int iy = oy * stride_ - pad_ + u;
                  const int ix = ox * stride_ - pad_ + v;
                  if (iy < 0 || iy >= H || ix < 0 || ix >= W) continue;
                  acc += static_cast<double>(
                             w.data[((static_cast<size_t>(o) * in_c_ + ci) * kh_ + u) *
                                        kw_ +
                                    v]) *
                         x[((static_cast<size_t>(bi) * in_c_ + ci) * H + iy) * W + ix];
                }
            y[((static_cast<size_t>(bi) * out_c_ + o) * OH + oy) * OW + ox] = acc;
          }
  }

  int out_channels() const { return out_c_; }

  Tensor w, b, gw, gb, vw, vb;

 private:
  void im2col(const float* x, int H, int W, int OH, int OW) {
    const int P = OH * OW;
    for (int ci = 0; ci < in_c_; ++ci)
      for (int u = 0; u < kh_; ++u)
        for (int v = 0; v < kw_; ++v) {
          float* dst = &col_[(static_cast<size_t>(ci) * kh_ * kw_ +
                              static_cast<size_t>(u) * kw_ + v) *
                             P];
          for (int oy = 0; oy < OH; ++oy) {
            const int iy = oy * stride_ - pad_ + u;
            if (iy < 0 || iy >= H) {
              for (int ox = 0; ox < OW; ++ox) dst[oy * OW + ox] = 0.f;
              continue;
            }
            const float* src = x + (static_cast<size_t>(ci) * H + iy) * W;
            for (int ox = 0; ox < OW; ++ox) {
              const int ix = ox * stride_ - pad_ + v;
              dst[oy * OW + ox] = (ix >= 0 && ix < W) ? src[ix] : 0.f;
            }
          }
        }
  }

  void col2im(float* gx, int H, int W, int OH, int OW) {
    const int P = OH * OW;
    for (int ci = 0; ci < in_c_; ++ci)
      for (int u = 0; u < kh_; ++u)
        for (int v = 0; v < kw_; ++v) {
          const float* src = &gcol_[(static_cast<size_t>(ci) * kh_ * kw_ +
                                     static_cast<size_t>(u) * kw_ + v) *
                                    P];
          for (int oy = 0; oy < OH; ++oy) {
            const int iy = oy * stride_ - pad_ + u;
            if (iy < 0 || iy >= H) continue;
            float* dst = gx + (static_cast<size_t>(ci) * H + iy) * W;
            for (int ox = 0; ox < OW; ++ox) {
              const int ix = ox * stride_ - pad_ + v;
              if (ix >= 0 && ix < W) dst[ix] += src[oy * OW + ox];
            }
          }
        }
  }

  int in_c_, out_c_, kh_, kw_, stride_, pad_;
  Tensor x_cache_;
  std::vector<float> col_, gcol_;
};

// ---------------------------------------------------------------------------

class MaxPoolLayer : public Layer {
 public:
  MaxPoolLayer(int window, int stride) : window_(window), stride_(stride) {
    if (window < 1 || stride < 1) fail(Errc::ConfigInvalid, "bad pool geometry");
  }

  std::string kind() const override { return "maxpool"; }

  std::vector<int> output_shape(const std::vector<int>& in) const override {
    if (in.size() != 4) fail(Errc::ShapeMismatch, "maxpool expects (B,C,H,W)");
    if (in[2] < window_ || in[3] < window_)
      fail(Errc::ShapeMismatch, "pool window exceeds spatial extent");
    return {in[0], in[1], (in[2] - window_) / stride_ + 1,
            (in[3] - window_) / stride_ + 1};
  }

  void forward(const Tensor& x, Tensor& y, bool cache) override {
    const auto ys = output_shape(x.shape);
    y = Tensor(ys);
    const int planes = x.shape[0] * x.shape[1];
    const int H = x.shape[2], W = x.shape[3];
    const int OH = ys[2], OW = ys[3];
    if (cache) {
      argmax_.assign(y.numel(), 0);
      in_shape_ = x.shape;
    }
    for (int pl = 0; pl < planes; ++pl) {
      const float* src = &x.data[static_cast<size_t>(pl) * H * W];
      float* dst = &y.data[static_cast<size_t>(pl) * OH * OW];
      for (int oy = 0; oy < OH; ++oy)
        for (int ox = 0; ox < OW; ++ox) {
          // ties go to the first element in row-major scan
          int best = (oy * stride_) * W + (ox * stride_);
          float bv = src[best];
          for (int u = 0; u < window_; ++u)
            for (int v = 0; v < window_; ++v) {
              const int idx = (oy * stride_ + u) * W + (ox * stride_ + v);
              if (src[idx] > bv) {
                bv = src[idx];
                best = idx;
              }
            }
          dst[oy * OW + ox] = bv;
          if (cache)
            argmax_[static_cast<size_t>(pl) * OH * OW + oy * OW + ox] = best;
        }
    }
  }

  void backward(const Tensor& gy, Tensor& gx) override {
    gx = Tensor(in_shape_);
    const int planes = in_shape_[0] * in_shape_[1];
    const int HW = in_shape_[2] * in_shape_[3];
    const size_t opp = gy.numel() / planes;
    for (int pl = 0; pl < planes; ++pl) {
      float* dst = &gx.data[static_cast<size_t>(pl) * HW];
      const float* src = &gy.data[static_cast<size_t>(pl) * opp];
      const int* am = &argmax_[static_cast<size_t>(pl) * opp];
      for (size_t i = 0; i < opp; ++i) dst[am[i]] += src[i];
    }
  }

  void forward_acc64(const std::vector<double>& x, const std::vector<int>& xs,
                     std::vector<double>& y, std::vector<int>& ys) const override {
    const int planes = xs[0] * xs[1];
    const int H = xs[2], W = xs[3];
    const int OH = (H - window_) / stride_ + 1, OW = (W - window_) / stride_ + 1;
    ys = {xs[0], xs[1], OH, OW};
    y.assign(static_cast<size_t>(planes) * OH * OW, 0.0);
    for (int pl = 0; pl < planes; ++pl)
      for (int oy = 0; oy < OH; ++oy)
        for (int ox = 0; ox < OW; ++ox) {
          double bv = x[static_cast<size_t>(pl) * H * W + (oy * stride_) * W +
                        ox * stride_];
          for (int u = 0; u < window_; ++u)
            for (int v = 0; v < window_; ++v)
              bv = std::max(bv, x[static_cast<size_t>(pl) * H * W +
                                  (oy * stride_ + u) * W + ox * stride_ + v]);
          y[static_cast<size_t>(pl) * OH * OW + oy * OW + ox] = bv;
        }
  }

 private:
  int window_, stride_;
  std::vector<int> argmax_;
  std::vector<int> in_shape_;
};

// ---------------------------------------------------------------------------

class ReluLayer : public Layer {
 public:
  std::string kind() const override { return "relu"; }

  std::vector<int> output_shape(const std::vector<int>& in) const override {
    return in;
  }

  void forward(const Tensor& x, Tensor& y, bool cache) override {
    y = x;
    for (auto& v : y.data) v = v > 0.f ? v : 0.f;
    if (cache) x_cache_ = x;
  }

  void backward(const Tensor& gy, Tensor& gx) override {
    gx = gy;
    for (size_t i = 0; i < gx.data.size(); ++i)
      if (x_cache_.data[i] <= 0.f) gx.data[i] = 0.f;
  }

  void forward_acc64(const std::vector<double>& x, const std::vector<int>& xs,
                     std::vector<double>& y, std::vector<int>& ys) const override {
    ys = xs;
    y = x;
    for (auto& v : y) v = v > 0.0 ? v : 0.0;
  }

 private:
  Tensor x_cache_;
};

// ---------------------------------------------------------------------------

class FullyConnectedLayer : public Layer {
 public:
  FullyConnectedLayer(int in_features, int out_features)
      : in_(in_features), out_(out_features), w(Tensor({out_features, in_features})),
        b(Tensor({out_features})), gw(Tensor({out_features, in_features})),
        gb(Tensor({out_features})), vw(Tensor({out_features, in_features})),
        vb(Tensor({out_features})) {}

  std::string kind() const override { return "fc"; }

  std::vector<int> output_shape(const std::vector<int>& in) const override {
    size_t flat = 1;
    for (size_t i = 1; i < in.size(); ++i) flat *= static_cast<size_t>(in[i]);
    if (flat != static_cast<size_t>(in_))
      fail(Errc::ShapeMismatch, "fc expects " + std::to_string(in_) + " features, got " +
                                    std::to_string(flat));
    return {in[0], out_};
  }

  // y = x * w^T + b; higher-rank inputs are flattened row-major
  void forward(const Tensor& x, Tensor& y, bool cache) override {
    const auto ys = output_shape(x.shape);
    const int B = ys[0];
    y = Tensor(ys);
    for (int bi = 0; bi < B; ++bi)
      for (int m = 0; m < out_; ++m) y.at2(bi, m) = b.data[m];
    gemm_abt(B, out_, in_, x.data.data(), w.data.data(), y.data.data());
    if (cache) x_cache_ = x;
  }

  void backward(const Tensor& gy, Tensor& gx) override {
    const int B = x_cache_.shape[0];
    require_shape(gy, {B, out_}, "fc grad_out");
    gx = Tensor(x_cache_.shape);
    // gx = gy * w
    gemm_ab(B, in_, out_, gy.data.data(), w.data.data(), gx.data.data());
    // gw = gy^T * x
    std::fill(gw.data.begin(), gw.data.end(), 0.f);
    gemm_atb(out_, in_, B, gy.data.data(), x_cache_.data.data(), gw.data.data());
    std::fill(gb.data.begin(), gb.data.end(), 0.f);
    for (int bi = 0; bi < B; ++bi)
      for (int m = 0; m < out_; ++m) gb.data[m] += gy.at2(bi, m);
  }

  std::vector<ParamTensor> params() override {
    return {{"w", &w, &gw, &vw}, {"b", &b, &gb, &vb}};
  }

  void forward_acc64(const std::vector<double>& x, const std::vector<int>& xs,
                     std::vector<double>& y, std::vector<int>& ys) const override {
    const int B = xs[0];
    ys = {B, out_};
    y.assign(static_cast<size_t>(B) * out_, 0.0);
    for (int bi = 0; bi < B; ++bi)
      for (int m = 0; m < out_; ++m) {
        double acc = b.data[m];
        const double* xr = &x[static_cast<size_t>(bi) * in_];
        const float* wr = &w.data[static_cast<size_t>(m) * in_];
        for (int n = 0; n < in_; ++n) acc += xr[n] * static_cast<double>(wr[n]);
        y[static_cast<size_t>(bi) * out_ + m] = acc;
      }
  }

  int out_features() const { return out_; }

  Tensor w, b, gw, gb, vw, vb;

 private:
  int in_, out_;
  Tensor x_cache_;
};

// ---------------------------------------------------------------------------

// Classification head: mean cross-entropy over the batch with row-max
// stabilized softmax; grad = (softmax - one_hot) / B.
class SoftmaxCrossEntropy {
 public:
  double forward(const Tensor& logits, const std::vector<int>& labels) {
    if (logits.shape.size() != 2 ||
        logits.shape[0] != static_cast<int>(labels.size()))
      fail(Errc::ShapeMismatch, "logits must be (B,K) with B labels");
    const int B = logits.shape[0], K = logits.shape[1];
    for (int label : labels)
      if (label < 0 || label >= K)
        fail(Errc::LabelOutOfRange, "label " + std::to_string(label) +
                                        " outside [0," + std::to_string(K) + ")");
    probs_ = logits;
    labels_ = labels;
    double loss = 0.0;
    for (int bi = 0; bi < B; ++bi) {
      float* row = &probs_.data[static_cast<size_t>(bi) * K];
      float mx = row[0];
      for (int k = 1; k < K; ++k) mx = std::max(mx, row[k]);
      float denom = 0.f;
      for (int k = 0; k < K; ++k) {
        row[k] = std::exp(row[k] - mx);
        denom += row[k];
      }
      for (int k = 0; k < K; ++k) row[k] /= denom;
      loss += -std::log(static_cast<double>(row[labels[bi]]));
    }
    return loss / B;
  }

  Tensor backward() const {
    Tensor g = probs_;
    const int B = g.shape[0];
    const float inv_b = 1.0f / static_cast<float>(B);
    for (int bi = 0; bi < B; ++bi) {
      g.at2(bi, labels_[bi]) -= 1.0f;
      for (int k = 0; k < g.shape[1]; ++k) g.at2(bi, k) *= inv_b;
    }
    return g;
  }

  const Tensor& probabilities() const { return probs_; }

  static double loss_acc64(const std::vector<double>& logits, int B, int K,
                           const std::vector<int>& labels) {
    double loss = 0.0;
    for (int bi = 0; bi < B; ++bi) {
      const double* row = &logits[static_cast<size_t>(bi) * K];
      double mx = row[0];
      for (int k = 1; k < K; ++k) mx = std::max(mx, row[k]);
      double denom = 0.0;
      for (int k = 0; k < K; ++k) denom += std::exp(row[k] - mx);
      loss += -(row[labels[bi]] - mx - std::log(denom));
    }
    return loss / B;
  }

 private:
  Tensor probs_;
  std::vector<int> labels_;
};

}  // namespace hanrec
