#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hanrec/synth.hpp"

using namespace hanrec;

namespace {

std::string asset(const std::string& rel) {
  return std::string(HANREC_ASSETS_DIR) + "/" + rel;
}

struct Engine {
  FontRegistry registry;
  ColorPalette palette;
  BackgroundSet backgrounds;
  AugmentationConfig cfg;
};

Engine test_engine() {
  Engine e{build_registry({
               {asset("fonts/hz-kai.hvf"), FontCategory::Basic, "kai"},
               {asset("fonts/hz-kai-slant.hvf"), FontCategory::Derived, "kai-slant"},
               {asset("fonts/hz-kai-narrow.hvf"), FontCategory::Derived, "kai-narrow"},
               {asset("fonts/hz-kai-hollow.hvf"), FontCategory::Special, "kai-hollow"},
           }),
           default_palette27(),
           BackgroundSet::load_dir(asset("backgrounds/set-a")),
           AugmentationConfig{}};
  e.cfg.validate();
  return e;
}

}  // namespace

TEST_CASE("synthesize is deterministic in (seed, index)") {
  Engine e = test_engine();
  LabeledImage a = synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 7, 3);
  LabeledImage b = synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 7, 3);
  CHECK(a.pixels.data == b.pixels.data);
  CHECK(a.provenance.to_json() == b.provenance.to_json());
  CHECK(provenance_digest(a.provenance) == provenance_digest(b.provenance));

  LabeledImage c = synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 7, 4);
  CHECK(a.pixels.data != c.pixels.data);
}

TEST_CASE("output matches the configured network input size") {
  Engine e = test_engine();
  LabeledImage img = synthesize(0x56DE, e.registry, e.palette, e.backgrounds, e.cfg, 1, 0);
  CHECK(img.pixels.h == 48);
  CHECK(img.pixels.w == 48);
  CHECK(img.pixels.c == 3);
  CHECK(img.label == 0x56DE);
  CHECK(img.source == Source::Artificial);

  e.cfg.grayscale = true;
  LabeledImage gray = synthesize(0x56DE, e.registry, e.palette, e.backgrounds, e.cfg, 1, 0);
  CHECK(gray.pixels.c == 1);
}

TEST_CASE("provenance parameters stay inside configured ranges") {
  Engine e = test_engine();
  for (uint64_t i = 0; i < 300; ++i) {
    LabeledImage img =
        synthesize(0x4E00, e.registry, e.palette, e.backgrounds, e.cfg, 99, i);
    const Provenance& p = img.provenance;
    CHECK(p.fill_ratio >= e.cfg.fill_lo);
    CHECK(p.fill_ratio <= e.cfg.fill_hi);
    CHECK(p.border_radius >= 1);
    CHECK(p.border_radius <= 3);
    CHECK(std::abs(p.shadow_dx) >= 1);
    CHECK(std::abs(p.shadow_dx) <= 3);
    CHECK(p.blend_alpha >= e.cfg.blend_alpha_lo);
    CHECK(p.blend_alpha <= e.cfg.blend_alpha_hi);
    CHECK(p.blur_sigma >= e.cfg.blur_sigma_lo);
    CHECK(p.blur_sigma <= e.cfg.blur_sigma_hi);
    CHECK(p.noise_sigma >= e.cfg.noise_sigma_lo * 255);
    CHECK(p.noise_sigma <= e.cfg.noise_sigma_hi * 255);
    CHECK(!p.font_id.empty());
    CHECK(!p.patch_id.empty());
  }
}

TEST_CASE("provenance replay regenerates the image bit-exactly") {
  Engine e = test_engine();
  LabeledImage orig =
      synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 123, 45);
  // round-trip the record through json, then regenerate from its keys
  Provenance p = Provenance::from_json(orig.provenance.to_json());
  LabeledImage replay =
      synthesize(p.codepoint, e.registry, e.palette, e.backgrounds, e.cfg, p.seed, p.index);
  CHECK(replay.pixels.data == orig.pixels.data);
  CHECK(replay.provenance.to_json() == p.to_json());
}

TEST_CASE("font categories in provenance follow 30/60/10") {
  Engine e = test_engine();
  int counts[3] = {0, 0, 0};
  const int n = 1500;
  for (int i = 0; i < n; ++i) {
    LabeledImage img =
        synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 5, i);
    if (img.provenance.font_category == "basic") counts[0]++;
    if (img.provenance.font_category == "derived") counts[1]++;
    if (img.provenance.font_category == "special") counts[2]++;
  }
  CHECK(counts[0] + counts[1] + counts[2] == n);
  CHECK(std::abs(counts[0] / double(n) - 0.30) < 0.05);
  CHECK(std::abs(counts[1] / double(n) - 0.60) < 0.05);
  CHECK(std::abs(counts[2] / double(n) - 0.10) < 0.05);
}

TEST_CASE("unsupported codepoint fails with GlyphMissing") {
  Engine e = test_engine();
  CHECK_THROWS_MATCHES(
      synthesize(0x0041, e.registry, e.palette, e.backgrounds, e.cfg, 1, 0), Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("GlyphMissing")));
}

TEST_CASE("scene tag is carried through") {
  Engine e = test_engine();
  LabeledImage img = synthesize(0x4E2D, e.registry, e.palette, e.backgrounds, e.cfg, 1,
                                0, Source::Scene);
  CHECK(img.source == Source::Scene);
  CHECK(source_name(img.source) == std::string("scene"));
}
