#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hanrec/error.hpp"
#include "hanrec/png_io.hpp"
#include "hanrec/provenance.hpp"
#include "hanrec/rng.hpp"
#include "hanrec/synth.hpp"

namespace hanrec {

enum class Split { Train, Holdout };

inline const char* split_name(Split s) { return s == Split::Train ? "train" : "holdout"; }

inline Split split_from_name(const std::string& s) {
  if (s == "train") return Split::Train;
  if (s == "holdout") return Split::Holdout;
  fail(Errc::ParseError, "unknown split tag: " + s);
}

inline std::string codepoint_to_utf8(uint32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

inline uint32_t utf8_to_codepoint(const std::string& s) {
  if (s.empty()) fail(Errc::ParseError, "empty utf-8 character");
  const unsigned char c0 = s[0];
  auto cont = [&](size_t i) -> uint32_t {
    if (i >= s.size() || (static_cast<unsigned char>(s[i]) & 0xC0) != 0x80)
      fail(Errc::ParseError, "bad utf-8 continuation");
    return static_cast<unsigned char>(s[i]) & 0x3F;
  };
  if (c0 < 0x80) return c0;
  if ((c0 & 0xE0) == 0xC0) return ((c0 & 0x1Fu) << 6) | cont(1);
  if ((c0 & 0xF0) == 0xE0) return ((c0 & 0x0Fu) << 12) | (cont(1) << 6) | cont(2);
  if ((c0 & 0xF8) == 0xF0)
    return ((c0 & 0x07u) << 18) | (cont(1) << 12) | (cont(2) << 6) | cont(3);
  fail(Errc::ParseError, "bad utf-8 lead byte");
}

// One manifest.jsonl line. Field names are part of the on-disk contract:
// "path", "codepoint", "char", "source", "split", "digest".
struct ManifestRecord {
  std::string path;  // relative to the manifest's directory
  uint32_t codepoint = 0;
  Source source = Source::Artificial;
  Split split = Split::Train;
  uint64_t digest = 0;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["path"] = path;
    j["codepoint"] = codepoint;
    j["char"] = codepoint_to_utf8(codepoint);
    j["source"] = source_name(source);
    j["split"] = split_name(split);
    j["digest"] = digest;
    return j;
  }

  static ManifestRecord from_json(const nlohmann::json& j) {
    ManifestRecord r;
    r.path = j.at("path").get<std::string>();
    r.codepoint = j.at("codepoint").get<uint32_t>();
    if (r.codepoint > 0x10FFFF || (r.codepoint >= 0xD800 && r.codepoint <= 0xDFFF))
      fail(Errc::ParseError, "invalid codepoint " + std::to_string(r.codepoint));
    const std::string ch = j.at("char").get<std::string>();
    if (utf8_to_codepoint(ch) != r.codepoint)
      fail(Errc::ParseError, "char does not match codepoint");
    r.source = source_from_name(j.at("source").get<std::string>());
    r.split = split_from_name(j.at("split").get<std::string>());
    r.digest = j.at("digest").get<uint64_t>();
    return r;
  }
};

// Ordered label space; class index == position.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(const std::vector<uint32_t>& cps) {
    for (uint32_t cp : cps) add(cp);
  }

  static Vocabulary from_file(const std::string& path, int limit = 0) {
    std::ifstream f(path);
    if (!f) fail(Errc::IoFailure, "cannot open vocabulary: " + path);
    Vocabulary v;
    std::string line;
    while (std::getline(f, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty()) continue;
      v.add(utf8_to_codepoint(line));
      if (limit > 0 && static_cast<int>(v.size()) >= limit) break;
    }
    if (v.size() == 0) fail(Errc::ConfigInvalid, "vocabulary is empty: " + path);
    return v;
  }

  void add(uint32_t cp) {
    if (index_.count(cp)) fail(Errc::ConfigInvalid, "duplicate vocabulary codepoint");
    index_[cp] = static_cast<int>(codepoints_.size());
    codepoints_.push_back(cp);
  }

  size_t size() const { return codepoints_.size(); }
  uint32_t codepoint(int idx) const { return codepoints_[static_cast<size_t>(idx)]; }
  const std::vector<uint32_t>& codepoints() const { return codepoints_; }

  int index_of(uint32_t cp) const {
    auto it = index_.find(cp);
    if (it == index_.end())
      fail(Errc::UnknownLabel,
           "codepoint U+" + FontData::cp_hex(cp) + " not in vocabulary");
    return it->second;
  }

  bool contains(uint32_t cp) const { return index_.count(cp) != 0; }

 private:
  std::vector<uint32_t> codepoints_;
  std::unordered_map<uint32_t, int> index_;
};

// ---------------------------------------------------------------------------
// dataset writing

// Writes one PNG per image under <out_dir>/images/, appends matching lines
// to manifest.jsonl and provenance.jsonl. File names come from the
// generation index, so parallel producers land on identical output.
class DatasetWriter {
 public:
  explicit DatasetWriter(const std::string& out_dir) : dir_(out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(fs::path(dir_) / "images", ec);
    if (ec) fail(Errc::IoFailure, "cannot create " + dir_ + ": " + ec.message());
    manifest_.open((fs::path(dir_) / "manifest.jsonl").string(), std::ios::trunc);
    provenance_.open((fs::path(dir_) / "provenance.jsonl").string(), std::ios::trunc);
    if (!manifest_ || !provenance_) fail(Errc::IoFailure, "cannot open manifest files");
  }

  ManifestRecord add(const LabeledImage& img, Split split) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%08llu.png",
                  static_cast<unsigned long long>(img.provenance.index));
    const std::string rel = std::string("images/") + name;
    write_png((std::filesystem::path(dir_) / rel).string(), img.pixels);

    ManifestRecord rec;
    rec.path = rel;
    rec.codepoint = img.label;
    rec.source = img.source;
    rec.split = split;
    rec.digest = provenance_digest(img.provenance);
    manifest_ << rec.to_json().dump() << '\n';
    nlohmann::json pj = img.provenance.to_json();
    pj["path"] = rel;
    provenance_ << pj.dump() << '\n';
    count_++;
    return rec;
  }

  // line-delimited, UTF-8, LF
  std::string finish() {
    manifest_.flush();
    provenance_.flush();
    if (!manifest_ || !provenance_) fail(Errc::IoFailure, "manifest write failed");
    return (std::filesystem::path(dir_) / "manifest.jsonl").string();
  }

  size_t count() const { return count_; }

 private:
  std::string dir_;
  std::ofstream manifest_;
  std::ofstream provenance_;
  size_t count_ = 0;
};

inline std::string write_dataset(const std::vector<LabeledImage>& images,
                                 const std::string& out_dir,
                                 Split split = Split::Train) {
  DatasetWriter w(out_dir);
  for (const auto& img : images) w.add(img, split);
  return w.finish();
}

// ---------------------------------------------------------------------------
// dataset reading

inline std::vector<ManifestRecord> read_manifest(const std::string& path,
                                                 bool validate_images = false) {
  std::ifstream f(path);
  if (!f) fail(Errc::IoFailure, "cannot open manifest: " + path);
  std::vector<ManifestRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    line_no++;
    if (line.empty()) continue;
    try {
      records.push_back(ManifestRecord::from_json(nlohmann::json::parse(line)));
    } catch (const Error& e) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const std::exception& e) {
      fail(Errc::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (validate_images) {
    const auto base = std::filesystem::path(path).parent_path();
    for (const auto& r : records)
      if (!std::filesystem::exists(base / r.path))
        fail(Errc::MissingImage, "missing image file: " + (base / r.path).string());
  }
  return records;
}

// ---------------------------------------------------------------------------
// stage-1 split

// Stratified split of artificial records: floor(N*fraction) records total,
// per-class counts within 1 of floor(n_c*fraction); deterministic in seed.
inline std::pair<std::vector<ManifestRecord>, std::vector<ManifestRecord>>
split_artificial(const std::vector<ManifestRecord>& records, double stage1_fraction,
                 uint64_t seed) {
  if (stage1_fraction < 0.0 || stage1_fraction > 1.0)
    fail(Errc::ConfigInvalid, "stage1_fraction must be in [0,1]");
  for (const auto& r : records)
    if (r.source != Source::Artificial)
      fail(Errc::NonArtificialRecord, "record is not artificial: " + r.path);

  // group record positions by class
  std::map<uint32_t, std::vector<size_t>> by_class;
  for (size_t i = 0; i < records.size(); ++i)
    by_class[records[i].codepoint].push_back(i);

  const size_t total_take =
      static_cast<size_t>(records.size() * stage1_fraction);

  // per-class quotas: floor, then distribute the remainder by largest
  // fractional part (ties by class order)
  struct ClassQuota {
    uint32_t cp;
    size_t quota;
    double frac;
  };
  std::vector<ClassQuota> quotas;
  size_t assigned = 0;
  for (const auto& [cp, members] : by_class) {
    double exact = members.size() * stage1_fraction;
    size_t q = static_cast<size_t>(exact);
    quotas.push_back({cp, q, exact - q});
    assigned += q;
  }
  std::vector<size_t> order(quotas.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return quotas[a].frac > quotas[b].frac;
  });
  for (size_t k = 0; assigned < total_take && k < order.size(); ++k) {
    ClassQuota& q = quotas[order[k]];
    if (q.quota < by_class[q.cp].size()) {
      q.quota++;
      assigned++;
    }
  }

  // seeded shuffle within each class, then take the quota
  std::vector<bool> in_stage1(records.size(), false);
  for (const auto& q : quotas) {
    auto& members = by_class[q.cp];
    Rng rng = Rng::stream(seed, q.cp);
    for (size_t i = members.size(); i > 1; --i)
      std::swap(members[i - 1], members[rng.below(i)]);
    for (size_t i = 0; i < q.quota; ++i) in_stage1[members[i]] = true;
  }

  std::pair<std::vector<ManifestRecord>, std::vector<ManifestRecord>> out;
  for (size_t i = 0; i < records.size(); ++i)
    (in_stage1[i] ? out.first : out.second).push_back(records[i]);
  return out;
}

}  // namespace hanrec
