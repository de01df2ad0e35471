#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "hanrec/font.hpp"
#include "hanrec/glyph_render.hpp"
#include "hanrec/palette.hpp"

using namespace hanrec;

static std::string asset(const std::string& rel) {
  return std::string(HANREC_ASSETS_DIR) + "/" + rel;
}

static FontRegistry test_registry() {
  return build_registry({
      {asset("fonts/hz-kai.hvf"), FontCategory::Basic, "kai"},
      {asset("fonts/hz-kai-slant.hvf"), FontCategory::Derived, "kai-slant"},
      {asset("fonts/hz-kai-narrow.hvf"), FontCategory::Derived, "kai-narrow"},
      {asset("fonts/hz-kai-hollow.hvf"), FontCategory::Special, "kai-hollow"},
  });
}

TEST_CASE("registry requires all three categories") {
  FontRegistry reg = test_registry();
  CHECK(reg.entries().size() == 4);
  CHECK(reg.weights().basic == 0.30);
  CHECK(reg.weights().derived == 0.60);
  CHECK(reg.weights().special == 0.10);

  CHECK_THROWS_MATCHES(
      build_registry({{asset("fonts/hz-kai.hvf"), FontCategory::Basic, "kai"},
                      {asset("fonts/hz-kai-slant.hvf"), FontCategory::Derived, "slant"}}),
      Error, Catch::Matchers::MessageMatches(
                 Catch::Matchers::ContainsSubstring("MissingCategory")));

  CHECK_THROWS_MATCHES(
      build_registry({{asset("fonts/nope.hvf"), FontCategory::Basic, "x"}}), Error,
      Catch::Matchers::MessageMatches(
          Catch::Matchers::ContainsSubstring("UnloadableFont")));
}

TEST_CASE("category selection follows the cumulative mapping") {
  FontRegistry reg = test_registry();
  CHECK(reg.sample(0.0, 0.5).category == FontCategory::Basic);
  CHECK(reg.sample(0.2999, 0.5).category == FontCategory::Basic);
  CHECK(reg.sample(0.30, 0.5).category == FontCategory::Derived);
  CHECK(reg.sample(0.8999, 0.5).category == FontCategory::Derived);
  CHECK(reg.sample(0.90, 0.5).category == FontCategory::Special);
  CHECK(reg.sample(0.95, 0.5).category == FontCategory::Special);
}

TEST_CASE("category frequencies converge to 30/60/10") {
  FontRegistry reg = test_registry();
  Rng rng(4242);
  const int n = 10000;
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i)
    counts[static_cast<int>(reg.sample(rng).category)]++;
  CHECK(std::abs(counts[0] / double(n) - 0.30) < 0.02);
  CHECK(std::abs(counts[1] / double(n) - 0.60) < 0.02);
  CHECK(std::abs(counts[2] / double(n) - 0.10) < 0.02);
}

TEST_CASE("color pairs always contrast") {
  ColorPalette bw{{Rgb{0, 0, 0}, Rgb{255, 255, 255}}};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    auto [fg, bg] = sample_color_pair(bw, rng);
    CHECK(fg != bg);
    CHECK(max_channel_distance(fg, bg) >= 64);
  }

  ColorPalette grays{{Rgb{128, 128, 128}, Rgb{130, 130, 130}}};
  Rng rng2(2);
  CHECK_THROWS_MATCHES(sample_color_pair(grays, rng2), Error,
                       Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                           "ContrastUnsatisfiable")));
}

TEST_CASE("default palette is the 27-point lattice") {
  ColorPalette p = default_palette27();
  REQUIRE(p.colors.size() == 27);
  p.validate();  // nonempty, distinct
  CHECK(p.colors[0] == Rgb{0, 0, 0});
  CHECK(p.colors[26] == Rgb{255, 255, 255});
  CHECK(parse_hex_color("#FF8000") == Rgb{255, 128, 0});
  CHECK(hex_color(Rgb{255, 128, 0}) == "#FF8000");
  CHECK_THROWS_AS(parse_hex_color("FF8000"), Error);
}

TEST_CASE("rendered glyph is neither empty nor flood-filled") {
  FontRegistry reg = test_registry();
  const FontEntry& kai = *reg.find("kai");
  Rng rng(7);
  BaseCharImage img = render_glyph(0x4E2D, kai, {0, 0, 0}, {255, 255, 255}, 64, 64, rng);
  int fg_px = 0;
  for (int y = 0; y < 64; ++y)
    for (int x = 0; x < 64; ++x)
      if (img.pixels.at(y, x, 0) < 128) fg_px++;
  CHECK(fg_px > 0);
  CHECK(fg_px < 64 * 64);
  CHECK(img.fill_ratio >= 0.70);
  CHECK(img.fill_ratio <= 0.90);
}

TEST_CASE("rendering is deterministic in all inputs") {
  FontRegistry reg = test_registry();
  const FontEntry& kai = *reg.find("kai");
  Rng r1(55), r2(55);
  BaseCharImage a = render_glyph(0x56DE, kai, {255, 0, 0}, {0, 0, 128}, 64, 64, r1);
  BaseCharImage b = render_glyph(0x56DE, kai, {255, 0, 0}, {0, 0, 128}, 64, 64, r2);
  CHECK(a.pixels.data == b.pixels.data);
}

TEST_CASE("single-stroke character covers fewer pixels than nested boxes") {
  // oracle: direct count of pixels closer to fg than bg
  FontRegistry reg = test_registry();
  const FontEntry& kai = *reg.find("kai");
  auto fg_count = [&](uint32_t cp) {
    Rng rng(11);  // same stream, so both glyphs get the same fill ratio
    BaseCharImage img = render_glyph(cp, kai, {0, 0, 0}, {255, 255, 255}, 64, 64, rng);
    int n = 0;
    for (uint8_t v : img.pixels.data)
      if (v < 128) n++;
    return n / 3;
  };
  CHECK(fg_count(0x4E00) < fg_count(0x56DE));  // 一 vs 回
}

TEST_CASE("missing codepoint raises GlyphMissing") {
  FontRegistry reg = test_registry();
  const FontEntry& kai = *reg.find("kai");
  Rng rng(3);
  CHECK_THROWS_MATCHES(render_glyph(0x0041, kai, {0, 0, 0}, {255, 255, 255}, 64, 64, rng),
                       Error, Catch::Matchers::MessageMatches(
                                  Catch::Matchers::ContainsSubstring("GlyphMissing")));
}

TEST_CASE("canvas below 16x16 is rejected") {
  FontRegistry reg = test_registry();
  Rng rng(3);
  CHECK_THROWS_AS(
      render_glyph(0x4E00, *reg.find("kai"), {0, 0, 0}, {255, 255, 255}, 8, 8, rng),
      Error);
}

TEST_CASE("hollow style removes interior coverage") {
  FontRegistry reg = test_registry();
  Rng r1(9), r2(9);
  BaseCharImage solid =
      render_glyph(0x56DE, *reg.find("kai"), {0, 0, 0}, {255, 255, 255}, 64, 64, r1);
  BaseCharImage hollow = render_glyph(0x56DE, *reg.find("kai-hollow"), {0, 0, 0},
                                      {255, 255, 255}, 64, 64, r2);
  double solid_cov = 0, hollow_cov = 0;
  for (float v : solid.coverage.v) solid_cov += v;
  for (float v : hollow.coverage.v) hollow_cov += v;
  CHECK(hollow_cov > 0);
  CHECK(hollow_cov < solid_cov);
}
