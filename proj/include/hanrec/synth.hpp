#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "hanrec/augment.hpp"
#include "hanrec/font.hpp"
#include "hanrec/glyph_render.hpp"
#include "hanrec/palette.hpp"
#include "hanrec/png_io.hpp"
#include "hanrec/provenance.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

enum class Source { Artificial, Scene };

inline const char* source_name(Source s) {
  return s == Source::Artificial ? "artificial" : "scene";
}

inline Source source_from_name(const std::string& s) {
  if (s == "artificial") return Source::Artificial;
  if (s == "scene") return Source::Scene;
  fail(Errc::ParseError, "unknown source tag: " + s);
}

struct LabeledImage {
  Image pixels;
  uint32_t label = 0;
  Source source = Source::Artificial;
  Provenance provenance;
};

// Natural-image patches used for background blending; loaded once,
// read-only afterwards.
struct BackgroundSet {
  std::vector<Image> patches;
  std::vector<std::string> ids;

  static BackgroundSet load_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    BackgroundSet set;
    if (!fs::is_directory(dir))
      fail(Errc::ConfigInvalid, "background_dir is not a directory: " + dir);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().extension() == ".png")
        names.push_back(e.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    for (const auto& n : names) {
      set.patches.push_back(read_png((fs::path(dir) / n).string()));
      set.ids.push_back(n);
    }
    if (set.patches.empty())
      fail(Errc::ConfigInvalid, "no .png patches in " + dir);
    return set;
  }
};

// Fixed per-stage substream tags so adding draws to one stage never
// perturbs another.
namespace synth_stage {
constexpr uint64_t kFont = 1;
constexpr uint64_t kColor = 2;
constexpr uint64_t kGlyph = 3;
constexpr uint64_t kBorderShadow = 4;
constexpr uint64_t kHomography = 5;
constexpr uint64_t kBlend = 6;
constexpr uint64_t kNoise = 7;
}  // namespace synth_stage

// The full engine pipeline for one image: font -> colors -> glyph ->
// border/shadow -> projective warp -> background blend -> noise/blur ->
// final resize. Deterministic in (seed, index); every sampled parameter is
// recorded in the returned provenance.
inline LabeledImage synthesize(uint32_t codepoint, const FontRegistry& registry,
                               const ColorPalette& palette,
                               const BackgroundSet& backgrounds,
                               const AugmentationConfig& cfg, uint64_t seed,
                               uint64_t index, Source source = Source::Artificial) {
  const Rng base = Rng::stream(seed, index);
  Provenance prov;
  prov.seed = seed;
  prov.index = index;
  prov.codepoint = codepoint;

  // font, with bounded resampling when the codepoint is missing
  Rng rng_font = base.fork(synth_stage::kFont);
  const FontEntry* font = nullptr;
  for (int attempt = 0; attempt < 10; ++attempt) {
    const FontEntry& candidate = registry.sample(rng_font);
    if (candidate.data->has_glyph(codepoint)) {
      font = &candidate;
      break;
    }
  }
  if (!font)
    fail(Errc::GlyphMissing, "no registered font covers U+" +
                                 FontData::cp_hex(codepoint) + " after 10 attempts");
  prov.font_id = font->id;
  prov.font_category = category_name(font->category);

  Rng rng_color = base.fork(synth_stage::kColor);
  auto [fg, bg] = sample_color_pair(palette, rng_color, cfg.contrast_floor);
  prov.fg = hex_color(fg);
  prov.bg = hex_color(bg);

  Rng rng_glyph = base.fork(synth_stage::kGlyph);
  BaseCharImage base_img = render_glyph(codepoint, *font, fg, bg, cfg.canvas,
                                        cfg.canvas, rng_glyph, cfg.fill_lo, cfg.fill_hi);
  prov.fill_ratio = base_img.fill_ratio;

  Rng rng_bs = base.fork(synth_stage::kBorderShadow);
  BorderShadowDraw draw = sample_border_shadow(rng_bs, cfg);
  prov.border = draw.border;
  prov.border_radius = draw.border_radius;
  prov.shadow = draw.shadow;
  prov.shadow_dx = draw.shadow_dx;
  prov.shadow_dy = draw.shadow_dy;
  BaseCharImage decorated = apply_border_shadow(base_img, draw);

  Rng rng_homog = base.fork(synth_stage::kHomography);
  ProjectiveTransform t = random_homography(rng_homog, cfg.canvas, cfg.canvas,
                                            cfg.corner_jitter);
  prov.homography = t.h.m;
  Image warped = warp(decorated.pixels, t, bg);

  Rng rng_blend = base.fork(synth_stage::kBlend);
  const size_t patch_idx = rng_blend.below(backgrounds.patches.size());
  const Image& patch = backgrounds.patches[patch_idx];
  prov.patch_id = backgrounds.ids[patch_idx];
  if (patch.h < warped.h || patch.w < warped.w)
    fail(Errc::PatchTooSmall, "patch " + prov.patch_id + " smaller than canvas");
  prov.crop_y = patch.h == warped.h ? 0 : static_cast<int>(rng_blend.below(patch.h - warped.h + 1));
  prov.crop_x = patch.w == warped.w ? 0 : static_cast<int>(rng_blend.below(patch.w - warped.w + 1));
  prov.blend_alpha = rng_blend.uniform(cfg.blend_alpha_lo, cfg.blend_alpha_hi);
  Image cropped(warped.h, warped.w, patch.c);
  for (int y = 0; y < warped.h; ++y)
    for (int x = 0; x < warped.w; ++x)
      for (int ch = 0; ch < patch.c; ++ch)
        cropped.at(y, x, ch) = patch.at(y + prov.crop_y, x + prov.crop_x, ch);
  // cropped is exact-size, so blend_background draws nothing further
  Image blended = blend_background(warped, cropped, prov.blend_alpha, rng_blend);

  Rng rng_noise = base.fork(synth_stage::kNoise);
  prov.blur_sigma = rng_noise.uniform(cfg.blur_sigma_lo, cfg.blur_sigma_hi);
  prov.noise_sigma = rng_noise.uniform(cfg.noise_sigma_lo, cfg.noise_sigma_hi) * 255.0;
  Image noisy = add_noise_and_blur(blended, prov.blur_sigma, prov.noise_sigma, rng_noise);

  LabeledImage out;
  out.pixels = finalize_image(noisy, cfg.output_size, cfg.grayscale);
  out.label = codepoint;
  out.source = source;
  out.provenance = prov;
  return out;
}

}  // namespace hanrec
