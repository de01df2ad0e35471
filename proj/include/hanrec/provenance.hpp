#pragma once

#include <array>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "hanrec/image.hpp"
#include "hanrec/palette.hpp"
#include "hanrec/version.hpp"

namespace hanrec {

// Every parameter sampled while synthesizing one image. Together with the
// engine version, (seed, index) and the engine config this regenerates the
// image bit-exactly; the scalars are recorded so datasets can be audited
// without regeneration.
struct Provenance {
  std::string engine = kEngineVersion;
  uint64_t seed = 0;
  uint64_t index = 0;
  uint32_t codepoint = 0;
  std::string font_id;
  std::string font_category;
  std::string fg;
  std::string bg;
  double fill_ratio = 0.0;
  bool border = false;
  int border_radius = 0;
  bool shadow = false;
  int shadow_dx = 0;
  int shadow_dy = 0;
  std::array<double, 9> homography{1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::string patch_id;
  int crop_x = 0;
  int crop_y = 0;
  double blend_alpha = 0.0;
  double blur_sigma = 0.0;
  double noise_sigma = 0.0;  // in intensity levels (fraction * 255)

  nlohmann::json to_json() const {
    nlohmann::json j;  // nlohmann::json orders keys, so dumps are canonical
    j["engine"] = engine;
    j["seed"] = seed;
    j["index"] = index;
    j["codepoint"] = codepoint;
    j["font_id"] = font_id;
    j["font_category"] = font_category;
    j["fg"] = fg;
    j["bg"] = bg;
    j["fill_ratio"] = fill_ratio;
    j["border"] = border;
    j["border_radius"] = border_radius;
    j["shadow"] = shadow;
    j["shadow_dx"] = shadow_dx;
    j["shadow_dy"] = shadow_dy;
    j["homography"] = homography;
    j["patch_id"] = patch_id;
    j["crop_x"] = crop_x;
    j["crop_y"] = crop_y;
    j["blend_alpha"] = blend_alpha;
    j["blur_sigma"] = blur_sigma;
    j["noise_sigma"] = noise_sigma;
    return j;
  }

  static Provenance from_json(const nlohmann::json& j) {
    Provenance p;
    p.engine = j.at("engine").get<std::string>();
    p.seed = j.at("seed").get<uint64_t>();
    p.index = j.at("index").get<uint64_t>();
    p.codepoint = j.at("codepoint").get<uint32_t>();
    p.font_id = j.at("font_id").get<std::string>();
    p.font_category = j.at("font_category").get<std::string>();
    p.fg = j.at("fg").get<std::string>();
    p.bg = j.at("bg").get<std::string>();
    p.fill_ratio = j.at("fill_ratio").get<double>();
    p.border = j.at("border").get<bool>();
    p.border_radius = j.at("border_radius").get<int>();
    p.shadow = j.at("shadow").get<bool>();
    p.shadow_dx = j.at("shadow_dx").get<int>();
    p.shadow_dy = j.at("shadow_dy").get<int>();
    p.homography = j.at("homography").get<std::array<double, 9>>();
    p.patch_id = j.at("patch_id").get<std::string>();
    p.crop_x = j.at("crop_x").get<int>();
    p.crop_y = j.at("crop_y").get<int>();
    p.blend_alpha = j.at("blend_alpha").get<double>();
    p.blur_sigma = j.at("blur_sigma").get<double>();
    p.noise_sigma = j.at("noise_sigma").get<double>();
    return p;
  }
};

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline uint64_t provenance_digest(const Provenance& p) {
  return fnv1a64(p.to_json().dump());
}

}  // namespace hanrec
