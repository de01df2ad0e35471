#pragma once

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "hanrec/error.hpp"
#include "hanrec/image.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

struct ColorPalette {
  std::vector<Rgb> colors;

  void validate() const {
    if (colors.empty()) fail(Errc::ConfigInvalid, "palette is empty");
    std::set<std::array<uint8_t, 3>> uniq(colors.begin(), colors.end());
    if (uniq.size() != colors.size())
      fail(Errc::ConfigInvalid, "palette has duplicate colors");
  }
};

// 27-color lattice {0,128,255}^3, red channel most significant.
inline ColorPalette default_palette27() {
  static const uint8_t level[3] = {0, 128, 255};
  ColorPalette p;
  for (int r = 0; r < 3; ++r)
    for (int g = 0; g < 3; ++g)
      for (int b = 0; b < 3; ++b)
        p.colors.push_back({level[r], level[g], level[b]});
  return p;
}

inline Rgb parse_hex_color(const std::string& s) {
  if (s.size() != 7 || s[0] != '#')
    fail(Errc::ConfigInvalid, "bad hex color: " + s);
  auto nib = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    fail(Errc::ConfigInvalid, "bad hex color: " + s);
  };
  return {static_cast<uint8_t>(nib(s[1]) * 16 + nib(s[2])),
          static_cast<uint8_t>(nib(s[3]) * 16 + nib(s[4])),
          static_cast<uint8_t>(nib(s[5]) * 16 + nib(s[6]))};
}

inline std::string hex_color(const Rgb& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", c[0], c[1], c[2]);
  return buf;
}

inline int max_channel_distance(const Rgb& a, const Rgb& b) {
  int d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(int(a[i]) - int(b[i])));
  return d;
}

// Foreground/background pair with fg != bg and max-channel distance at
// least `contrast_floor`; bg is resampled, bounded at 100 attempts.
inline std::pair<Rgb, Rgb> sample_color_pair(const ColorPalette& palette, Rng& rng,
                                             int contrast_floor = 64) {
  if (palette.colors.size() < 2)
    fail(Errc::ConfigInvalid, "palette needs at least 2 colors");
  const Rgb fg = palette.colors[rng.below(palette.colors.size())];
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Rgb bg = palette.colors[rng.below(palette.colors.size())];
    if (bg != fg && max_channel_distance(fg, bg) >= contrast_floor)
      return {fg, bg};
  }
  fail(Errc::ContrastUnsatisfiable,
       "no palette pair with contrast >= " + std::to_string(contrast_floor) +
           " for fg " + hex_color(fg));
}

}  // namespace hanrec
