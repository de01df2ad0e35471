#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hanrec/error.hpp"

namespace hanrec {

using Rgb = std::array<uint8_t, 3>;

inline uint8_t clamp_u8(double v) {
  long r = std::lround(v);
  if (r < 0) return 0;
  if (r > 255) return 255;
  return static_cast<uint8_t>(r);
}

// Dense H x W x C image, 8-bit channels, row-major, channel-interleaved.
struct Image {
  int h = 0, w = 0, c = 0;
  std::vector<uint8_t> data;

  Image() = default;
  Image(int h_, int w_, int c_, uint8_t fill = 0)
      : h(h_), w(w_), c(c_), data(static_cast<size_t>(h_) * w_ * c_, fill) {}

  uint8_t& at(int y, int x, int ch) {
    return data[(static_cast<size_t>(y) * w + x) * c + ch];
  }
  uint8_t at(int y, int x, int ch) const {
    return data[(static_cast<size_t>(y) * w + x) * c + ch];
  }

  bool same_shape(const Image& o) const {
    return h == o.h && w == o.w && c == o.c;
  }

  void fill(const Rgb& color) {
    if (c == 1) {
      for (auto& v : data) v = color[0];
      return;
    }
    for (size_t i = 0; i < data.size(); i += c)
      for (int ch = 0; ch < c; ++ch) data[i + ch] = color[ch];
  }
};

// Rec.601 luma, rounded to nearest.
inline Image to_grayscale(const Image& img) {
  if (img.c == 1) return img;
  Image out(img.h, img.w, 1);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x) {
      double l = 0.299 * img.at(y, x, 0) + 0.587 * img.at(y, x, 1) +
                 0.114 * img.at(y, x, 2);
      out.at(y, x, 0) = clamp_u8(l);
    }
  return out;
}

// Bilinear resize with center-aligned sampling.
inline Image resize_bilinear(const Image& img, int oh, int ow) {
  if (oh == img.h && ow == img.w) return img;
  Image out(oh, ow, img.c);
  const double sy = static_cast<double>(img.h) / oh;
  const double sx = static_cast<double>(img.w) / ow;
  for (int y = 0; y < oh; ++y) {
    double fy = (y + 0.5) * sy - 0.5;
    int y0 = static_cast<int>(std::floor(fy));
    double ty = fy - y0;
    int ya = y0 < 0 ? 0 : (y0 >= img.h ? img.h - 1 : y0);
    int yb = y0 + 1 < 0 ? 0 : (y0 + 1 >= img.h ? img.h - 1 : y0 + 1);
    for (int x = 0; x < ow; ++x) {
      double fx = (x + 0.5) * sx - 0.5;
      int x0 = static_cast<int>(std::floor(fx));
      double tx = fx - x0;
      int xa = x0 < 0 ? 0 : (x0 >= img.w ? img.w - 1 : x0);
      int xb = x0 + 1 < 0 ? 0 : (x0 + 1 >= img.w ? img.w - 1 : x0 + 1);
      for (int ch = 0; ch < img.c; ++ch) {
        double v = (1 - ty) * ((1 - tx) * img.at(ya, xa, ch) +
                               tx * img.at(ya, xb, ch)) +
                   ty * ((1 - tx) * img.at(yb, xa, ch) +
                         tx * img.at(yb, xb, ch));
        out.at(y, x, ch) = clamp_u8(v);
      }
    }
  }
  return out;
}

}  // namespace hanrec
