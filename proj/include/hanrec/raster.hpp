#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace hanrec {

using PolyPoint = std::array<float, 2>;
using Polygon = std::vector<PolyPoint>;

// Per-pixel coverage in [0, 1] for one canvas.
struct Coverage {
  int h = 0, w = 0;
  std::vector<float> v;

  Coverage(int h_, int w_) : h(h_), w(w_), v(static_cast<size_t>(h_) * w_, 0.f) {}
  float& at(int y, int x) { return v[static_cast<size_t>(y) * w + x]; }
  float at(int y, int x) const { return v[static_cast<size_t>(y) * w + x]; }
};

namespace raster_detail {

constexpr int kSubRows = 4;

struct Crossing {
  float x;
  int dir;
};

// Accumulates alpha over [x0, x1) on one pixel row, fractional at the ends.
inline void add_span(float* row, int w, float x0, float x1, float alpha) {
  if (x1 <= 0.f || x0 >= static_cast<float>(w) || x1 <= x0) return;
  x0 = std::max(x0, 0.f);
  x1 = std::min(x1, static_cast<float>(w));
  int p0 = static_cast<int>(x0);
  int p1 = static_cast<int>(x1);
  if (p0 == p1) {
    row[p0] += alpha * (x1 - x0);
    return;
  }
  row[p0] += alpha * (static_cast<float>(p0 + 1) - x0);
  for (int p = p0 + 1; p < p1; ++p) row[p] += alpha;
  if (p1 < w) row[p1] += alpha * (x1 - static_cast<float>(p1));
}

}  // namespace raster_detail

// Scanline fill of one closed polygon (nonzero winding) into `cov`,
// saturating at 1. 4 sub-rows per pixel row, analytic horizontal coverage.
inline void fill_polygon(Coverage& cov, const Polygon& poly) {
  using namespace raster_detail;
  if (poly.size() < 3) return;
  const float sub_alpha = 1.0f / kSubRows;
  std::vector<Crossing> xs;
  for (int y = 0; y < cov.h; ++y) {
    float* row = &cov.v[static_cast<size_t>(y) * cov.w];
    for (int s = 0; s < kSubRows; ++s) {
      float sy = static_cast<float>(y) + (s + 0.5f) / kSubRows;
      xs.clear();
      for (size_t i = 0; i < poly.size(); ++i) {
        const PolyPoint& a = poly[i];
        const PolyPoint& b = poly[(i + 1) % poly.size()];
        // half-open rule keeps vertices from double counting
        if ((a[1] <= sy) == (b[1] <= sy)) continue;
        float t = (sy - a[1]) / (b[1] - a[1]);
        xs.push_back({a[0] + t * (b[0] - a[0]), b[1] > a[1] ? 1 : -1});
      }
      if (xs.empty()) continue;
      std::sort(xs.begin(), xs.end(),
                [](const Crossing& l, const Crossing& r) { return l.x < r.x; });
      int winding = 0;
      float span_start = 0.f;
      for (const Crossing& c : xs) {
        if (winding != 0 && c.x > span_start)
          add_span(row, cov.w, span_start, c.x, sub_alpha);
        winding += c.dir;
        if (winding != 0 && (winding - c.dir) == 0) span_start = c.x;
      }
    }
  }
  for (auto& a : cov.v) a = std::min(a, 1.0f);
}

// Union of several stroke outlines: per-stroke nonzero fill, coverages
// added and clamped.
inline Coverage rasterize_strokes(const std::vector<Polygon>& strokes, int h, int w) {
  Coverage total(h, w);
  Coverage one(h, w);
  for (const Polygon& p : strokes) {
    std::fill(one.v.begin(), one.v.end(), 0.f);
    fill_polygon(one, p);
    for (size_t i = 0; i < total.v.size(); ++i)
      total.v[i] = std::min(1.0f, total.v[i] + one.v[i]);
  }
  return total;
}

// Separable square-window max filter (radius r).
inline Coverage dilate(const Coverage& c, int r) {
  Coverage tmp(c.h, c.w), out(c.h, c.w);
  for (int y = 0; y < c.h; ++y)
    for (int x = 0; x < c.w; ++x) {
      float m = 0.f;
      for (int k = -r; k <= r; ++k) {
        int xx = x + k;
        if (xx >= 0 && xx < c.w) m = std::max(m, c.at(y, xx));
      }
      tmp.at(y, x) = m;
    }
  for (int y = 0; y < c.h; ++y)
    for (int x = 0; x < c.w; ++x) {
      float m = 0.f;
      for (int k = -r; k <= r; ++k) {
        int yy = y + k;
        if (yy >= 0 && yy < c.h) m = std::max(m, tmp.at(yy, x));
      }
      out.at(y, x) = m;
    }
  return out;
}

inline Coverage erode(const Coverage& c, int r) {
  Coverage tmp(c.h, c.w), out(c.h, c.w);
  for (int y = 0; y < c.h; ++y)
    for (int x = 0; x < c.w; ++x) {
      float m = 1.f;
      for (int k = -r; k <= r; ++k) {
        int xx = x + k;
        m = std::min(m, (xx >= 0 && xx < c.w) ? c.at(y, xx) : 0.f);
      }
      tmp.at(y, x) = m;
    }
  for (int y = 0; y < c.h; ++y)
    for (int x = 0; x < c.w; ++x) {
      float m = 1.f;
      for (int k = -r; k <= r; ++k) {
        int yy = y + k;
        m = std::min(m, (yy >= 0 && yy < c.h) ? tmp.at(yy, x) : 0.f);
      }
      out.at(y, x) = m;
    }
  return out;
}

}  // namespace hanrec
