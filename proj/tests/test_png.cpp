#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "hanrec/png_io.hpp"
#include "hanrec/rng.hpp"

using namespace hanrec;

static Image random_image(int h, int w, int c, uint64_t seed) {
  Image img(h, w, c);
  Rng r(seed);
  for (auto& v : img.data) v = static_cast<uint8_t>(r.below(256));
  return img;
}

TEST_CASE("png round-trips rgb and grayscale") {
  for (int c : {1, 3}) {
    Image img = random_image(37, 23, c, 99 + c);
    auto bytes = encode_png(img);
    Image back = decode_png(bytes);
    REQUIRE(back.h == img.h);
    REQUIRE(back.w == img.w);
    REQUIRE(back.c == img.c);
    CHECK(back.data == img.data);
  }
}

TEST_CASE("png encoding is byte-deterministic") {
  Image img = random_image(48, 48, 3, 7);
  CHECK(encode_png(img) == encode_png(img));
}

TEST_CASE("png file io") {
  auto dir = std::filesystem::temp_directory_path() / "hanrec_png_test";
  std::filesystem::create_directories(dir);
  Image img = random_image(20, 31, 3, 5);
  write_png((dir / "x.png").string(), img);
  Image back = read_png((dir / "x.png").string());
  CHECK(back.data == img.data);
  std::filesystem::remove_all(dir);
}

TEST_CASE("decodes externally produced patches") {
  // written by Pillow, which picks its own row filters
  Image patch = read_png(std::string(HANREC_ASSETS_DIR) + "/backgrounds/set-a/patch-00.png");
  CHECK(patch.h == 96);
  CHECK(patch.w == 96);
  CHECK(patch.c == 3);
}

TEST_CASE("corrupt png is rejected") {
  std::vector<uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
  CHECK_THROWS_AS(decode_png(junk), Error);
  CHECK_THROWS_AS(read_png("/nonexistent/file.png"), Error);
}
