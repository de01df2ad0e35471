#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "hanrec/font.hpp"
#include "hanrec/image.hpp"
#include "hanrec/palette.hpp"
#include "hanrec/raster.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

// Clean rasterized character before any scene processing. Coverage is kept
// so later stages can outline/shadow the glyph without re-deriving a mask.
struct BaseCharImage {
  Image pixels;
  uint32_t label = 0;
  std::string font_id;
  Rgb fg{0, 0, 0};
  Rgb bg{255, 255, 255};
  Coverage coverage{0, 0};
  double fill_ratio = 0.0;
};

// Rasterizes `cp` centered on an h x w canvas, scaled so the glyph bbox
// spans fill_ratio of the smaller canvas dimension; fill_ratio is drawn
// uniformly from [fill_lo, fill_hi].
inline BaseCharImage render_glyph(uint32_t cp, const FontEntry& font, Rgb fg, Rgb bg,
                                  int canvas_h, int canvas_w, Rng& rng,
                                  double fill_lo = 0.70, double fill_hi = 0.90) {
  if (canvas_h < 16 || canvas_w < 16)
    fail(Errc::ConfigInvalid, "canvas must be at least 16x16");
  const std::vector<Polygon>& strokes = font.data->glyph(cp);  // GlyphMissing
  if (strokes.empty())
    fail(Errc::GlyphMissing, font.id + " has empty outline for U+" + FontData::cp_hex(cp));

  const double fill = rng.uniform(fill_lo, fill_hi);

  float min_x = std::numeric_limits<float>::max(), min_y = min_x;
  float max_x = std::numeric_limits<float>::lowest(), max_y = max_x;
  for (const Polygon& p : strokes)
    for (const PolyPoint& pt : p) {
      min_x = std::min(min_x, pt[0]);
      max_x = std::max(max_x, pt[0]);
      min_y = std::min(min_y, pt[1]);
      max_y = std::max(max_y, pt[1]);
    }
  const double bw = std::max<double>(max_x - min_x, 1.0);
  const double bh = std::max<double>(max_y - min_y, 1.0);
  const double scale = fill * std::min(canvas_h, canvas_w) / std::max(bw, bh);
  const double off_x = 0.5 * canvas_w - scale * 0.5 * (min_x + max_x);
  const double off_y = 0.5 * canvas_h - scale * 0.5 * (min_y + max_y);

  std::vector<Polygon> placed;
  placed.reserve(strokes.size());
  for (const Polygon& p : strokes) {
    Polygon q;
    q.reserve(p.size());
    for (const PolyPoint& pt : p)
      q.push_back({static_cast<float>(pt[0] * scale + off_x),
                   static_cast<float>(pt[1] * scale + off_y)});
    placed.push_back(std::move(q));
  }

  Coverage cov = rasterize_strokes(placed, canvas_h, canvas_w);
  switch (font.data->style()) {
    case GlyphStyle::Solid:
      break;
    case GlyphStyle::Heavy:
      cov = dilate(cov, 1);
      break;
    case GlyphStyle::Hollow: {
      Coverage inner = erode(cov, 1);
      for (size_t i = 0; i < cov.v.size(); ++i)
        cov.v[i] = std::max(0.f, cov.v[i] - inner.v[i]);
      break;
    }
  }

  BaseCharImage out;
  out.pixels = Image(canvas_h, canvas_w, 3);
  for (int y = 0; y < canvas_h; ++y)
    for (int x = 0; x < canvas_w; ++x) {
      float a = cov.at(y, x);
      for (int ch = 0; ch < 3; ++ch)
        out.pixels.at(y, x, ch) = clamp_u8(bg[ch] * (1.0 - a) + fg[ch] * a);
    }
  out.label = cp;
  out.font_id = font.id;
  out.fg = fg;
  out.bg = bg;
  out.coverage = std::move(cov);
  out.fill_ratio = fill;
  return out;
}

}  // namespace hanrec
