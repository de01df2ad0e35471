#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hanrec/geometry.hpp"
#include "hanrec/glyph_render.hpp"
#include "hanrec/image.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

struct AugmentationConfig {
  double border_prob = 0.25;
  double shadow_prob = 0.25;
  double corner_jitter = 0.15;          // fraction of min(H, W)
  double blend_alpha_lo = 0.10;
  double blend_alpha_hi = 0.35;
  double noise_sigma_lo = 0.0;          // fraction of full intensity scale
  double noise_sigma_hi = 0.08;
  double blur_sigma_lo = 0.0;           // pixels
  double blur_sigma_hi = 1.5;
  double fill_lo = 0.70;
  double fill_hi = 0.90;
  int contrast_floor = 64;
  int canvas = 64;                       // pre-warp canvas, square
  int output_size = 48;                  // network input, square
  bool grayscale = false;
  std::string background_dir;

  void validate() const {
    auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob(border_prob) || !prob(shadow_prob))
      fail(Errc::ConfigInvalid, "probabilities must be in [0,1]");
    if (corner_jitter < 0.0 || corner_jitter >= 0.5)
      fail(Errc::ConfigInvalid, "corner_jitter must be in [0, 0.5)");
    if (blend_alpha_lo > blend_alpha_hi || blend_alpha_lo < 0 || blend_alpha_hi > 1)
      fail(Errc::ConfigInvalid, "blend_alpha range must be ordered inside [0,1]");
    if (noise_sigma_lo > noise_sigma_hi || noise_sigma_lo < 0)
      fail(Errc::ConfigInvalid, "noise_sigma range must be ordered and nonnegative");
    if (blur_sigma_lo > blur_sigma_hi || blur_sigma_lo < 0)
      fail(Errc::ConfigInvalid, "blur_sigma range must be ordered and nonnegative");
    if (fill_lo > fill_hi || fill_lo <= 0 || fill_hi > 1)
      fail(Errc::ConfigInvalid, "fill range must be ordered inside (0,1]");
    if (canvas < 16 || output_size < 16)
      fail(Errc::ConfigInvalid, "canvas and output_size must be >= 16");
  }
};

// ---------------------------------------------------------------------------
// borders and shadows

struct BorderShadowDraw {
  bool border = false;
  int border_radius = 0;
  bool shadow = false;
  int shadow_dx = 0;
  int shadow_dy = 0;
};

// Border and shadow are drawn independently: with border_prob a 1-3 px
// contrasting outline around the glyph coverage, with shadow_prob a
// darkened glyph copy offset by 1-3 px per axis underneath it.
inline BorderShadowDraw sample_border_shadow(Rng& rng, const AugmentationConfig& cfg) {
  BorderShadowDraw d;
  d.border = rng.bernoulli(cfg.border_prob);
  d.border_radius = rng.range_int(1, 3);
  d.shadow = rng.bernoulli(cfg.shadow_prob);
  d.shadow_dx = rng.range_int(1, 3) * (rng.bernoulli(0.5) ? 1 : -1);
  d.shadow_dy = rng.range_int(1, 3) * (rng.bernoulli(0.5) ? 1 : -1);
  return d;
}

inline double luma(const Rgb& c) {
  return 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2];
}

inline BaseCharImage apply_border_shadow(const BaseCharImage& img,
                                         const BorderShadowDraw& draw) {
  if (!draw.border && !draw.shadow) return img;
  const int h = img.pixels.h, w = img.pixels.w;
  BaseCharImage out = img;

  // recomposite bottom-up: background, shadow, border band, glyph
  constexpr double kShadowDarken = 0.4;
  const Rgb border_color = luma(img.bg) >= 128 ? Rgb{0, 0, 0} : Rgb{255, 255, 255};

  std::vector<float> shadow_cov;
  if (draw.shadow) {
    shadow_cov.assign(static_cast<size_t>(h) * w, 0.f);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        int sy = y - draw.shadow_dy, sx = x - draw.shadow_dx;
        if (sy >= 0 && sy < h && sx >= 0 && sx < w)
          shadow_cov[static_cast<size_t>(y) * w + x] = img.coverage.at(sy, sx);
      }
  }
  std::vector<float> border_cov;
  if (draw.border) {
    Coverage dil = dilate(img.coverage, draw.border_radius);
    border_cov.assign(static_cast<size_t>(h) * w, 0.f);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        border_cov[static_cast<size_t>(y) * w + x] =
            std::max(0.f, dil.at(y, x) - img.coverage.at(y, x));
  }

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double px[3] = {double(img.bg[0]), double(img.bg[1]), double(img.bg[2])};
      if (draw.shadow) {
        float a = shadow_cov[static_cast<size_t>(y) * w + x];
        for (int ch = 0; ch < 3; ++ch)
          px[ch] = px[ch] * (1.0 - a) + kShadowDarken * img.fg[ch] * a;
      }
      if (draw.border) {
        float a = border_cov[static_cast<size_t>(y) * w + x];
        for (int ch = 0; ch < 3; ++ch)
          px[ch] = px[ch] * (1.0 - a) + border_color[ch] * a;
      }
      float a = img.coverage.at(y, x);
      for (int ch = 0; ch < 3; ++ch) {
        px[ch] = px[ch] * (1.0 - a) + img.fg[ch] * a;
        out.pixels.at(y, x, ch) = clamp_u8(px[ch]);
      }
    }
  return out;
}

inline BaseCharImage add_border_or_shadow(const BaseCharImage& img, Rng& rng,
                                          const AugmentationConfig& cfg) {
  return apply_border_shadow(img, sample_border_shadow(rng, cfg));
}

// ---------------------------------------------------------------------------
// projective distortion

struct ProjectiveTransform {
  Mat3 h;

  ProjectiveTransform() = default;
  explicit ProjectiveTransform(const Mat3& m) : h(m) {
    h.normalize();  // SingularTransform when h22 ~ 0
    if (std::abs(h.det()) < 1e-9)
      fail(Errc::SingularTransform, "homography not invertible");
  }
};

// Each canvas corner is displaced independently by uniforms in
// [-jitter*min(H,W), +jitter*min(H,W)] per axis; the homography mapping
// original to displaced corners is solved directly. Non-convex corner sets
// are resampled, at most 20 times.
inline ProjectiveTransform random_homography(Rng& rng, int h, int w,
                                             double corner_jitter) {
  if (corner_jitter < 0.0 || corner_jitter >= 0.5)
    fail(Errc::ConfigInvalid, "corner_jitter must be in [0, 0.5)");
  const double j = corner_jitter * std::min(h, w);
  const std::array<Vec2, 4> src = {Vec2{0, 0}, Vec2{double(w - 1), 0},
                                   Vec2{double(w - 1), double(h - 1)},
                                   Vec2{0, double(h - 1)}};
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::array<Vec2, 4> dst;
    bool all_zero = true;
    for (int i = 0; i < 4; ++i) {
      double dx = rng.uniform(-j, j);
      double dy = rng.uniform(-j, j);
      all_zero = all_zero && dx == 0.0 && dy == 0.0;
      dst[i] = {src[i][0] + dx, src[i][1] + dy};
    }
    if (all_zero) return ProjectiveTransform(Mat3::identity());
    if (!is_convex_quad(dst)) continue;
    Mat3 m = homography_from_points(src, dst);
    m.normalize();
    if (std::abs(m.det()) < 1e-9) continue;
    return ProjectiveTransform(m);
  }
  fail(Errc::DegenerateQuad, "no convex corner displacement in 20 attempts");
}

// Inverse-maps every output pixel and samples bilinearly; taps outside the
// source contribute `fill`.
inline Image warp(const Image& img, const ProjectiveTransform& t, const Rgb& fill) {
  const Mat3 inv = t.h.inverse();
  Image out(img.h, img.w, img.c);
  for (int y = 0; y < out.h; ++y)
    for (int x = 0; x < out.w; ++x) {
      const double wv = inv.m[6] * x + inv.m[7] * y + inv.m[8];
      if (std::abs(wv) < 1e-12) {
        for (int ch = 0; ch < img.c; ++ch) out.at(y, x, ch) = fill[ch % 3];
        continue;
      }
      const double sx = (inv.m[0] * x + inv.m[1] * y + inv.m[2]) / wv;
      const double sy = (inv.m[3] * x + inv.m[4] * y + inv.m[5]) / wv;
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0, fy = sy - y0;
      for (int ch = 0; ch < img.c; ++ch) {
        auto tap = [&](int yy, int xx) -> double {
          if (yy < 0 || yy >= img.h || xx < 0 || xx >= img.w) return fill[ch % 3];
          return img.at(yy, xx, ch);
        };
        const double v = (1 - fy) * ((1 - fx) * tap(y0, x0) + fx * tap(y0, x0 + 1)) +
                         fy * ((1 - fx) * tap(y0 + 1, x0) + fx * tap(y0 + 1, x0 + 1));
        out.at(y, x, ch) = clamp_u8(v);
      }
    }
  return out;
}

// ---------------------------------------------------------------------------
// background blending

// out = (1-alpha)*img + alpha*patch, patch randomly cropped to size.
inline Image blend_background(const Image& img, const Image& patch, double alpha,
                              Rng& rng) {
  if (patch.h < img.h || patch.w < img.w)
    fail(Errc::PatchTooSmall, "background patch smaller than canvas");
  const int oy = patch.h == img.h ? 0 : static_cast<int>(rng.below(patch.h - img.h + 1));
  const int ox = patch.w == img.w ? 0 : static_cast<int>(rng.below(patch.w - img.w + 1));
  Image out(img.h, img.w, img.c);
  for (int y = 0; y < img.h; ++y)
    for (int x = 0; x < img.w; ++x)
      for (int ch = 0; ch < img.c; ++ch) {
        double p = patch.c == 1 ? patch.at(y + oy, x + ox, 0)
                                : patch.at(y + oy, x + ox, ch % patch.c);
        out.at(y, x, ch) =
            clamp_u8((1.0 - alpha) * img.at(y, x, ch) + alpha * p);
      }
  return out;
}

// ---------------------------------------------------------------------------
// noise and blur

inline std::vector<double> gaussian_kernel(double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-0.5 * (i * i) / (sigma * sigma));
    sum += k[i + r];
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable Gaussian blur (radius ceil(3*sigma), reflected borders),
// then i.i.d. zero-mean Gaussian pixel noise; one rounding at the end.
inline Image add_noise_and_blur(const Image& img, double blur_sigma,
                                double noise_sigma_255, Rng& rng) {
  if (blur_sigma == 0.0 && noise_sigma_255 == 0.0) return img;
  const int h = img.h, w = img.w, c = img.c;
  std::vector<double> plane(img.data.begin(), img.data.end());

  if (blur_sigma > 0.0) {
    const std::vector<double> k = gaussian_kernel(blur_sigma);
    const int r = static_cast<int>(k.size() / 2);
    auto reflect = [](int i, int n) {
      while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
      }
      return i;
    };
    std::vector<double> tmp(plane.size());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int ch = 0; ch < c; ++ch) {
          double s = 0.0;
          for (int i = -r; i <= r; ++i)
            s += k[i + r] * plane[(static_cast<size_t>(y) * w + reflect(x + i, w)) * c + ch];
          tmp[(static_cast<size_t>(y) * w + x) * c + ch] = s;
        }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int ch = 0; ch < c; ++ch) {
          double s = 0.0;
          for (int i = -r; i <= r; ++i)
            s += k[i + r] * tmp[(static_cast<size_t>(reflect(y + i, h)) * w + x) * c + ch];
          plane[(static_cast<size_t>(y) * w + x) * c + ch] = s;
        }
  }

  if (noise_sigma_255 > 0.0) {
    for (auto& v : plane) v += noise_sigma_255 * rng.normal();
  }

  Image out(h, w, c);
  for (size_t i = 0; i < plane.size(); ++i) out.data[i] = clamp_u8(plane[i]);
  return out;
}

inline Image add_noise_and_blur(const Image& img, Rng& rng,
                                const AugmentationConfig& cfg) {
  const double blur_sigma = rng.uniform(cfg.blur_sigma_lo, cfg.blur_sigma_hi);
  const double noise_sigma = rng.uniform(cfg.noise_sigma_lo, cfg.noise_sigma_hi) * 255.0;
  return add_noise_and_blur(img, blur_sigma, noise_sigma, rng);
}

// ---------------------------------------------------------------------------
// final sizing

inline Image finalize_image(const Image& img, int output_size, bool grayscale) {
  Image out = resize_bilinear(img, output_size, output_size);
  if (grayscale) out = to_grayscale(out);
  return out;
}

}  // namespace hanrec
