#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "hanrec/manifest.hpp"
#include "hanrec/png_io.hpp"
#include "hanrec/tensor.hpp"

namespace hanrec {

// Per-channel mean of pixel values scaled to [0,1]. Computed once over the
// stage-1 training set and stored with the model so train and eval agree.
struct ChannelStats {
  int channels = 3;
  std::array<float, 3> mean{0.f, 0.f, 0.f};
};

// Decoded-image cache keyed by path; read-only after warmup, shared by
// training and evaluation passes.
class ImageStore {
 public:
  explicit ImageStore(const std::string& manifest_path)
      : base_(std::filesystem::path(manifest_path).parent_path().string()) {}

  const Image& get(const std::string& rel_path) const {
    auto it = cache_.find(rel_path);
    if (it != cache_.end()) return it->second;
    Image img = read_png((std::filesystem::path(base_) / rel_path).string());
    return cache_.emplace(rel_path, std::move(img)).first->second;
  }

 private:
  std::string base_;
  mutable std::unordered_map<std::string, Image> cache_;
};

inline ChannelStats compute_channel_stats(const ImageStore& store,
                                          const std::vector<ManifestRecord>& records) {
  if (records.empty()) fail(Errc::EmptyDataset, "no records for channel stats");
  ChannelStats st;
  st.channels = store.get(records[0].path).c;
  std::array<double, 3> sum{0, 0, 0};
  size_t count = 0;
  for (const auto& r : records) {
    const Image& img = store.get(r.path);
    if (img.c != st.channels)
      fail(Errc::ShapeMismatch, "mixed channel counts in dataset: " + r.path);
    for (int y = 0; y < img.h; ++y)
      for (int x = 0; x < img.w; ++x)
        for (int ch = 0; ch < img.c; ++ch) sum[ch] += img.at(y, x, ch);
    count += static_cast<size_t>(img.h) * img.w;
  }
  for (int ch = 0; ch < st.channels; ++ch)
    st.mean[ch] = static_cast<float>(sum[ch] / (255.0 * count));
  return st;
}

// B x C x H x W batch in [0,1] minus the per-channel mean, plus label
// indices resolved against the vocabulary.
inline std::pair<Tensor, std::vector<int>> load_batch(
    const ImageStore& store, const std::vector<ManifestRecord>& records,
    const Vocabulary& vocab, const std::vector<size_t>& batch_indices,
    const ChannelStats& stats) {
  if (batch_indices.empty()) fail(Errc::EmptyDataset, "empty batch");
  const Image& first = store.get(records.at(batch_indices[0]).path);
  const int c = first.c, h = first.h, w = first.w;
  if (c != stats.channels)
    fail(Errc::ShapeMismatch, "channel stats do not match image channels");

  Tensor x({static_cast<int>(batch_indices.size()), c, h, w});
  std::vector<int> labels;
  labels.reserve(batch_indices.size());
  for (size_t bi = 0; bi < batch_indices.size(); ++bi) {
    const ManifestRecord& rec = records.at(batch_indices[bi]);
    const Image& img = store.get(rec.path);
    if (img.c != c || img.h != h || img.w != w)
      fail(Errc::ShapeMismatch, "image shape mismatch: " + rec.path);
    labels.push_back(vocab.index_of(rec.codepoint));  // UnknownLabel
    for (int ch = 0; ch < c; ++ch)
      for (int y = 0; y < h; ++y)
        for (int xx = 0; xx < w; ++xx)
          x.at4(static_cast<int>(bi), ch, y, xx) =
              static_cast<float>(img.at(y, xx, ch)) / 255.0f - stats.mean[ch];
  }
  return {std::move(x), std::move(labels)};
}

}  // namespace hanrec
