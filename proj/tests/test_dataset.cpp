#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "hanrec/batch.hpp"
#include "hanrec/manifest.hpp"
#include "hanrec/synth.hpp"

using namespace hanrec;
namespace fs = std::filesystem;

namespace {

std::string asset(const std::string& rel) {
  return std::string(HANREC_ASSETS_DIR) + "/" + rel;
}

struct TmpDir {
  fs::path path;
  explicit TmpDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TmpDir() { fs::remove_all(path); }
};

std::vector<LabeledImage> make_images(int n, uint64_t seed) {
  static FontRegistry reg = build_registry({
      {asset("fonts/hz-kai.hvf"), FontCategory::Basic, "kai"},
      {asset("fonts/hz-kai-slant.hvf"), FontCategory::Derived, "kai-slant"},
      {asset("fonts/hz-kai-hollow.hvf"), FontCategory::Special, "kai-hollow"},
  });
  static ColorPalette palette = default_palette27();
  static BackgroundSet bgs = BackgroundSet::load_dir(asset("backgrounds/set-a"));
  AugmentationConfig cfg;
  const uint32_t cps[3] = {0x4E00, 0x4E2D, 0x56DE};
  std::vector<LabeledImage> out;
  for (int i = 0; i < n; ++i)
    out.push_back(synthesize(cps[i % 3], reg, palette, bgs, cfg, seed, i));
  return out;
}

ManifestRecord rec_of(uint32_t cp, Source src, int i) {
  ManifestRecord r;
  r.path = "images/img_" + std::to_string(i) + ".png";
  r.codepoint = cp;
  r.source = src;
  r.split = Split::Train;
  r.digest = 1000 + i;
  return r;
}

}  // namespace

TEST_CASE("write_dataset produces one line per image and round-trips") {
  TmpDir tmp("hanrec_ds_roundtrip");
  auto images = make_images(10, 5);
  std::string manifest = write_dataset(images, tmp.path.string());

  std::ifstream f(manifest);
  int lines = 0;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) lines++;
  CHECK(lines == 10);

  auto records = read_manifest(manifest, /*validate_images=*/true);
  REQUIRE(records.size() == 10);
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].codepoint == images[i].label);
    CHECK(records[i].source == images[i].source);
    CHECK(records[i].split == Split::Train);
    CHECK(records[i].digest == provenance_digest(images[i].provenance));
  }

  // images decode to what was synthesized
  Image img0 = read_png((tmp.path / records[0].path).string());
  CHECK(img0.data == images[0].pixels.data);
}

TEST_CASE("empty stream writes an empty manifest and no images") {
  TmpDir tmp("hanrec_ds_empty");
  std::string manifest = write_dataset({}, tmp.path.string());
  auto records = read_manifest(manifest);
  CHECK(records.empty());
  CHECK(fs::is_empty(tmp.path / "images"));
}

TEST_CASE("malformed manifest lines are reported with their line number") {
  TmpDir tmp("hanrec_ds_bad");
  std::ofstream f(tmp.path / "manifest.jsonl");
  f << rec_of(0x4E00, Source::Artificial, 0).to_json().dump() << "\n";
  f << "{\"path\":\"x.png\",\"codepoint\":1114999,\"char\":\"?\",\"source\":"
       "\"artificial\",\"split\":\"train\",\"digest\":1}\n";
  f.close();
  try {
    read_manifest((tmp.path / "manifest.jsonl").string());
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("missing image is caught in validation mode") {
  TmpDir tmp("hanrec_ds_missing");
  auto images = make_images(3, 6);
  std::string manifest = write_dataset(images, tmp.path.string());
  fs::remove(tmp.path / "images" / "img_00000001.png");
  CHECK_NOTHROW(read_manifest(manifest, false));
  try {
    read_manifest(manifest, true);
    FAIL("expected MissingImage");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::MissingImage);
  }
}

TEST_CASE("split arithmetic matches the stated counts") {
  // 200,000 records over 50 classes, fraction 0.95 -> exactly 190,000/10,000
  std::vector<ManifestRecord> records;
  records.reserve(200000);
  for (int i = 0; i < 200000; ++i)
    records.push_back(rec_of(0x4E00 + (i % 50), Source::Artificial, i));
  auto [stage1, reserve] = split_artificial(records, 0.95, 42);
  CHECK(stage1.size() == 190000);
  CHECK(reserve.size() == 10000);

  // fraction 1.0 -> everything in stage1
  auto [all1, none] = split_artificial(records, 1.0, 42);
  CHECK(all1.size() == 200000);
  CHECK(none.empty());

  // floor arithmetic: 101 records at 0.5 -> 50/51
  std::vector<ManifestRecord> odd;
  for (int i = 0; i < 101; ++i) odd.push_back(rec_of(0x4E00, Source::Artificial, i));
  auto [fifty, fifty_one] = split_artificial(odd, 0.5, 1);
  CHECK(fifty.size() == 50);
  CHECK(fifty_one.size() == 51);
}

TEST_CASE("split is stratified, disjoint, and seed-reproducible") {
  std::vector<ManifestRecord> records;
  int id = 0;
  for (int k = 0; k < 7; ++k) {  // uneven class sizes
    int n = 37 + 11 * k;
    for (int i = 0; i < n; ++i)
      records.push_back(rec_of(0x4E00 + k, Source::Artificial, id++));
  }
  auto [s1a, resa] = split_artificial(records, 0.80, 9);
  auto [s1b, resb] = split_artificial(records, 0.80, 9);

  // reproducible
  REQUIRE(s1a.size() == s1b.size());
  for (size_t i = 0; i < s1a.size(); ++i) CHECK(s1a[i].path == s1b[i].path);

  // disjoint and complete
  CHECK(s1a.size() + resa.size() == records.size());
  std::map<std::string, int> seen;
  for (const auto& r : s1a) seen[r.path]++;
  for (const auto& r : resa) seen[r.path]++;
  for (const auto& [p, n] : seen) CHECK(n == 1);

  // per-class counts within 1 of floor(n_c * fraction)
  std::map<uint32_t, int> per_class;
  for (const auto& r : s1a) per_class[r.codepoint]++;
  for (int k = 0; k < 7; ++k) {
    int n = 37 + 11 * k;
    int expect = static_cast<int>(n * 0.80);
    CHECK(std::abs(per_class[0x4E00 + k] - expect) <= 1);
  }

  // different seed picks different members
  auto [s1c, resc] = split_artificial(records, 0.80, 10);
  bool any_diff = false;
  for (size_t i = 0; i < s1a.size() && !any_diff; ++i)
    any_diff = s1a[i].path != s1c[i].path;
  CHECK(any_diff);
}

TEST_CASE("scene records are rejected by the splitter") {
  std::vector<ManifestRecord> records{rec_of(0x4E00, Source::Artificial, 0),
                                      rec_of(0x4E00, Source::Scene, 1)};
  try {
    split_artificial(records, 0.5, 1);
    FAIL("expected NonArtificialRecord");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonArtificialRecord);
  }
}

TEST_CASE("load_batch scales, centers, and shapes the tensor") {
  TmpDir tmp("hanrec_ds_batch");
  auto images = make_images(32, 8);
  std::string manifest = write_dataset(images, tmp.path.string());
  auto records = read_manifest(manifest);
  ImageStore store(manifest);
  Vocabulary vocab(std::vector<uint32_t>{0x4E00, 0x4E2D, 0x56DE});

  ChannelStats stats = compute_channel_stats(store, records);
  for (int ch = 0; ch < 3; ++ch) {
    CHECK(stats.mean[ch] > 0.0f);
    CHECK(stats.mean[ch] < 1.0f);
  }

  std::vector<size_t> idx(32);
  for (size_t i = 0; i < 32; ++i) idx[i] = i;
  auto [x, labels] = load_batch(store, records, vocab, idx, stats);
  CHECK(x.shape == std::vector<int>{32, 3, 48, 48});
  CHECK(labels.size() == 32);
  for (int label : labels) {
    CHECK(label >= 0);
    CHECK(label < 3);
  }

  // a raw pixel value v maps to v/255 - mean (so 255 is 1.0 pre-subtraction)
  const Image& img0 = store.get(records[0].path);
  float expect = img0.at(0, 0, 0) / 255.0f - stats.mean[0];
  CHECK(x.at4(0, 0, 0, 0) == expect);
}

TEST_CASE("labels outside the vocabulary raise UnknownLabel") {
  TmpDir tmp("hanrec_ds_unk");
  auto images = make_images(3, 9);
  std::string manifest = write_dataset(images, tmp.path.string());
  auto records = read_manifest(manifest);
  ImageStore store(manifest);
  Vocabulary tiny(std::vector<uint32_t>{0x4E00});  // misses the other two
  ChannelStats stats = compute_channel_stats(store, records);
  try {
    load_batch(store, records, tiny, {0, 1, 2}, stats);
    FAIL("expected UnknownLabel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownLabel);
  }
}

TEST_CASE("vocabulary loads from file and keeps dense indices") {
  Vocabulary v = Vocabulary::from_file(asset("vocab/chars-200.txt"));
  CHECK(v.size() == 200);
  for (size_t i = 0; i < v.size(); ++i)
    CHECK(v.index_of(v.codepoint(static_cast<int>(i))) == static_cast<int>(i));

  Vocabulary head = Vocabulary::from_file(asset("vocab/chars-200.txt"), 50);
  CHECK(head.size() == 50);
  CHECK(head.codepoint(0) == v.codepoint(0));
}
