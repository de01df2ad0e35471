#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hanrec/error.hpp"
#include "hanrec/raster.hpp"
#include "hanrec/rng.hpp"

namespace hanrec {

enum class FontCategory { Basic, Derived, Special };

inline const char* category_name(FontCategory c) {
  switch (c) {
    case FontCategory::Basic: return "basic";
    case FontCategory::Derived: return "derived";
    case FontCategory::Special: return "special";
  }
  return "?";
}

inline FontCategory category_from_name(const std::string& s) {
  if (s == "basic") return FontCategory::Basic;
  if (s == "derived") return FontCategory::Derived;
  if (s == "special") return FontCategory::Special;
  fail(Errc::ConfigInvalid, "unknown font category: " + s);
}

// Coverage-space styling applied after the outlines are filled.
enum class GlyphStyle { Solid, Hollow, Heavy };

// A loaded .hvf vector font: closed glyph outlines in em units, y down.
class FontData {
 public:
  static std::shared_ptr<FontData> load(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(Errc::UnloadableFont, "cannot open font: " + path);
    nlohmann::json doc;
    try {
      f >> doc;
    } catch (const std::exception& e) {
      fail(Errc::UnloadableFont, "bad font json: " + path + ": " + e.what());
    }
    auto fd = std::make_shared<FontData>();
    try {
      if (doc.at("format").get<std::string>() != "hvf-1")
        fail(Errc::UnloadableFont, "unsupported font format: " + path);
      fd->name_ = doc.at("name").get<std::string>();
      fd->units_per_em_ = doc.at("units_per_em").get<double>();
      std::string render = doc.value("render", "solid");
      fd->style_ = render == "hollow"  ? GlyphStyle::Hollow
                   : render == "heavy" ? GlyphStyle::Heavy
                                       : GlyphStyle::Solid;
      for (auto& [key, strokes] : doc.at("glyphs").items()) {
        uint32_t cp = static_cast<uint32_t>(std::stoul(key));
        std::vector<Polygon> polys;
        for (auto& stroke : strokes) {
          Polygon p;
          p.reserve(stroke.size());
          for (auto& pt : stroke)
            p.push_back({pt.at(0).get<float>(), pt.at(1).get<float>()});
          if (p.size() >= 3) polys.push_back(std::move(p));
        }
        fd->glyphs_.emplace(cp, std::move(polys));
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      fail(Errc::UnloadableFont, "bad font structure: " + path + ": " + e.what());
    }
    if (fd->glyphs_.empty() || fd->units_per_em_ <= 0)
      fail(Errc::UnloadableFont, "font has no glyphs: " + path);
    return fd;
  }

  const std::string& name() const { return name_; }
  double units_per_em() const { return units_per_em_; }
  GlyphStyle style() const { return style_; }

  bool has_glyph(uint32_t cp) const { return glyphs_.count(cp) != 0; }

  const std::vector<Polygon>& glyph(uint32_t cp) const {
    auto it = glyphs_.find(cp);
    if (it == glyphs_.end())
      fail(Errc::GlyphMissing, name_ + " lacks codepoint U+" + cp_hex(cp));
    return it->second;
  }

  static std::string cp_hex(uint32_t cp) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04X", cp);
    return buf;
  }

 private:
  std::string name_;
  double units_per_em_ = 1024.0;
  GlyphStyle style_ = GlyphStyle::Solid;
  std::map<uint32_t, std::vector<Polygon>> glyphs_;
};

struct FontEntry {
  std::string id;
  std::string path;
  FontCategory category = FontCategory::Basic;
  std::string display_name;
  std::shared_ptr<FontData> data;  // loaded once, shared read-only
};

struct CategoryWeights {
  double basic = 0.30;
  double derived = 0.60;
  double special = 0.10;
};

// Validated font inventory with the fixed 30/60/10 category sampling.
class FontRegistry {
 public:
  const std::vector<FontEntry>& entries() const { return entries_; }
  const CategoryWeights& weights() const { return weights_; }

  const std::vector<int>& category_members(FontCategory c) const {
    return by_category_[static_cast<int>(c)];
  }

  // Cumulative mapping is fixed Basic -> Derived -> Special:
  // u < 0.30 Basic, u < 0.90 Derived, else Special; v picks uniformly
  // within the category.
  const FontEntry& sample(double u, double v) const {
    FontCategory c = u < weights_.basic                      ? FontCategory::Basic
                     : u < weights_.basic + weights_.derived ? FontCategory::Derived
                                                             : FontCategory::Special;
    const auto& members = by_category_[static_cast<int>(c)];
    size_t k = static_cast<size_t>(v * static_cast<double>(members.size()));
    if (k >= members.size()) k = members.size() - 1;
    return entries_[members[k]];
  }

  const FontEntry& sample(Rng& rng) const {
    double u = rng.uniform();
    double v = rng.uniform();
    return sample(u, v);
  }

  const FontEntry* find(const std::string& id) const {
    for (const auto& e : entries_)
      if (e.id == id) return &e;
    return nullptr;
  }

  friend FontRegistry build_registry(
      const std::vector<std::tuple<std::string, FontCategory, std::string>>& specs);

 private:
  std::vector<FontEntry> entries_;
  std::array<std::vector<int>, 3> by_category_;
  CategoryWeights weights_;
};

// specs: (path, category, id). Every path must load; every category must
// be represented.
inline FontRegistry build_registry(
    const std::vector<std::tuple<std::string, FontCategory, std::string>>& specs) {
  FontRegistry reg;
  for (const auto& [path, category, id] : specs) {
    FontEntry e;
    e.path = path;
    e.category = category;
    e.data = FontData::load(path);  // throws UnloadableFont
    e.display_name = e.data->name();
    e.id = id.empty() ? e.display_name : id;
    reg.by_category_[static_cast<int>(category)].push_back(
        static_cast<int>(reg.entries_.size()));
    reg.entries_.push_back(std::move(e));
  }
  for (int c = 0; c < 3; ++c) {
    if (reg.by_category_[c].empty())
      fail(Errc::MissingCategory,
           std::string("no fonts in category '") +
               category_name(static_cast<FontCategory>(c)) + "'");
  }
  return reg;
}

}  // namespace hanrec
