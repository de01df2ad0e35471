#pragma once

#include <cstring>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hanrec/batch.hpp"
#include "hanrec/manifest.hpp"
#include "hanrec/netspec.hpp"
#include "hanrec/nn/network.hpp"

// Checkpoint container, magic "GFCK":
//   "GFCK" | version u32 LE | tensor count u32 LE | tensors...
// tensor: name_len u16 LE | name UTF-8 | rank u8 | extents u32 LE each |
//         float32 LE data.
// Besides the weights it stores the architecture, the normalization
// statistics and the vocabulary as auxiliary tensors.

namespace hanrec {

namespace ckpt_detail {

constexpr uint32_t kVersion = 1;

inline void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f32(std::string& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

struct Reader {
  const uint8_t* p;
  const uint8_t* end;
  std::string origin;

  void need(size_t n) const {
    if (static_cast<size_t>(end - p) < n)
      fail(Errc::ParseError, "truncated checkpoint: " + origin);
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(p[0] | (p[1] << 8));
    p += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                 (static_cast<uint32_t>(p[2]) << 16) |
                 (static_cast<uint32_t>(p[3]) << 24);
    p += 4;
    return v;
  }
  uint8_t u8() {
    need(1);
    return *p++;
  }
  float f32() {
    uint32_t bits = u32();
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
  }
  std::string str(size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(p), n);
    p += n;
    return s;
  }
};

// layer kind codes inside "arch.*" tensors
inline float kind_code(LayerKind k) {
  switch (k) {
    case LayerKind::Conv: return 1;
    case LayerKind::MaxPool: return 2;
    case LayerKind::FullyConnected: return 3;
    case LayerKind::ReLU: return 4;
    case LayerKind::SoftmaxLoss: return 5;
  }
  return 0;
}

inline LayerKind kind_from_code(int c) {
  switch (c) {
    case 1: return LayerKind::Conv;
    case 2: return LayerKind::MaxPool;
    case 3: return LayerKind::FullyConnected;
    case 4: return LayerKind::ReLU;
    case 5: return LayerKind::SoftmaxLoss;
  }
  fail(Errc::ParseError, "bad layer kind code in checkpoint");
}

}  // namespace ckpt_detail

struct Checkpoint {
  NetworkSpec spec;
  std::map<std::string, Tensor> tensors;  // weights keyed "layerNN.{w,b}"
  ChannelStats stats;
  Vocabulary vocab;
  std::string regime;  // "A", "S", "A+S" or empty

  Network instantiate() const {
    Network net = build_network(spec, /*seed=*/0);
    for (auto& p : net.parameters()) {
      auto it = tensors.find(p.name);
      if (it == tensors.end())
        fail(Errc::ParseError, "checkpoint missing tensor " + p.name);
      if (it->second.shape != p.value->shape)
        fail(Errc::ShapeMismatch, "checkpoint tensor shape mismatch: " + p.name);
      *p.value = it->second;
    }
    return net;
  }
};

inline std::string serialize_checkpoint(const Checkpoint& ck) {
  using namespace ckpt_detail;
  std::vector<std::pair<std::string, Tensor>> all(ck.tensors.begin(), ck.tensors.end());

  {  // architecture: input, classes, one row per layer spec
    Tensor input({3});
    for (int i = 0; i < 3; ++i) input.data[i] = static_cast<float>(ck.spec.input[i]);
    all.emplace_back("arch.input", input);
    Tensor classes({1});
    classes.data[0] = static_cast<float>(ck.spec.num_classes);
    all.emplace_back("arch.classes", classes);
    Tensor name({std::max<int>(1, static_cast<int>(ck.spec.name.size()))});
    for (size_t i = 0; i < ck.spec.name.size(); ++i)
      name.data[i] = static_cast<float>(static_cast<unsigned char>(ck.spec.name[i]));
    all.emplace_back("arch.name", name);
    for (size_t i = 0; i < ck.spec.layers.size(); ++i) {
      const LayerSpec& l = ck.spec.layers[i];
      Tensor row({9});
      row.data[0] = kind_code(l.kind);
      row.data[1] = static_cast<float>(l.out_channels);
      row.data[2] = static_cast<float>(l.kernel_h);
      row.data[3] = static_cast<float>(l.kernel_w);
      row.data[4] = static_cast<float>(l.stride);
      row.data[5] = static_cast<float>(l.padding);
      row.data[6] = static_cast<float>(l.window);
      row.data[7] = static_cast<float>(l.pool_stride);
      row.data[8] = static_cast<float>(l.out_features);
      char buf[24];
      std::snprintf(buf, sizeof buf, "arch.layer%03zu", i);
      all.emplace_back(buf, row);
    }
  }
  {  // normalization statistics
    Tensor mean({std::max(1, ck.stats.channels)});
    for (int i = 0; i < ck.stats.channels; ++i) mean.data[i] = ck.stats.mean[i];
    all.emplace_back("norm.channel_mean", mean);
  }
  {  // vocabulary: codepoints fit float32 exactly (all < 2^24)
    Tensor vocab({std::max<int>(1, static_cast<int>(ck.vocab.size()))});
    for (size_t i = 0; i < ck.vocab.size(); ++i)
      vocab.data[i] = static_cast<float>(ck.vocab.codepoint(static_cast<int>(i)));
    all.emplace_back("vocab.codepoints", vocab);
  }
  if (!ck.regime.empty()) {
    Tensor reg({static_cast<int>(ck.regime.size())});
    for (size_t i = 0; i < ck.regime.size(); ++i)
      reg.data[i] = static_cast<float>(static_cast<unsigned char>(ck.regime[i]));
    all.emplace_back("meta.regime", reg);
  }

  std::string out = "GFCK";
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(all.size()));
  for (const auto& [name, tensor] : all) {
    put_u16(out, static_cast<uint16_t>(name.size()));
    out += name;
    out.push_back(static_cast<char>(tensor.shape.size()));
    for (int e : tensor.shape) put_u32(out, static_cast<uint32_t>(e));
    for (float f : tensor.data) put_f32(out, f);
  }
  return out;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& ck) {
  std::string bytes = serialize_checkpoint(ck);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::IoFailure, "cannot open checkpoint for write: " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(Errc::IoFailure, "checkpoint write failed: " + path);
}

inline Checkpoint load_checkpoint(const std::string& path) {
  using namespace ckpt_detail;
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoFailure, "cannot open checkpoint: " + path);
  std::string bytes((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
  Reader r{reinterpret_cast<const uint8_t*>(bytes.data()),
           reinterpret_cast<const uint8_t*>(bytes.data()) + bytes.size(), path};
  if (r.str(4) != "GFCK") fail(Errc::ParseError, "not a checkpoint: " + path);
  if (r.u32() != kVersion) fail(Errc::ParseError, "unsupported checkpoint version");
  const uint32_t count = r.u32();

  std::map<std::string, Tensor> raw;
  for (uint32_t i = 0; i < count; ++i) {
    const uint16_t name_len = r.u16();
    std::string name = r.str(name_len);
    const uint8_t rank = r.u8();
    std::vector<int> shape;
    for (int d = 0; d < rank; ++d) shape.push_back(static_cast<int>(r.u32()));
    Tensor t(shape);
    for (auto& v : t.data) v = r.f32();
    raw.emplace(std::move(name), std::move(t));
  }

  Checkpoint ck;
  auto take = [&](const std::string& name) -> Tensor {
    auto it = raw.find(name);
    if (it == raw.end()) fail(Errc::ParseError, "checkpoint missing " + name);
    Tensor t = std::move(it->second);
    raw.erase(it);
    return t;
  };

  Tensor input = take("arch.input");
  for (int i = 0; i < 3; ++i) ck.spec.input[i] = static_cast<int>(input.data[i]);
  ck.spec.num_classes = static_cast<int>(take("arch.classes").data[0]);
  Tensor name = take("arch.name");
  for (float ch : name.data)
    if (ch > 0) ck.spec.name.push_back(static_cast<char>(static_cast<int>(ch)));
  for (size_t i = 0;; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "arch.layer%03zu", i);
    auto it = raw.find(buf);
    if (it == raw.end()) break;
    const Tensor& row = it->second;
    LayerSpec l;
    l.kind = kind_from_code(static_cast<int>(row.data[0]));
    l.out_channels = static_cast<int>(row.data[1]);
    l.kernel_h = static_cast<int>(row.data[2]);
    l.kernel_w = static_cast<int>(row.data[3]);
    l.stride = static_cast<int>(row.data[4]);
    l.padding = static_cast<int>(row.data[5]);
    l.window = static_cast<int>(row.data[6]);
    l.pool_stride = static_cast<int>(row.data[7]);
    l.out_features = static_cast<int>(row.data[8]);
    ck.spec.layers.push_back(l);
    raw.erase(it);
  }

  Tensor mean = take("norm.channel_mean");
  ck.stats.channels = static_cast<int>(mean.data.size());
  for (size_t i = 0; i < mean.data.size() && i < 3; ++i)
    ck.stats.mean[i] = mean.data[i];

  Tensor vocab = take("vocab.codepoints");
  for (float cp : vocab.data) ck.vocab.add(static_cast<uint32_t>(cp));

  auto rit = raw.find("meta.regime");
  if (rit != raw.end()) {
    for (float ch : rit->second.data)
      ck.regime.push_back(static_cast<char>(static_cast<int>(ch)));
    raw.erase(rit);
  }

  ck.tensors = std::move(raw);  // the remaining entries are the weights
  return ck;
}

inline Checkpoint make_checkpoint(Network& net, const NetworkSpec& spec,
                                  const ChannelStats& stats, const Vocabulary& vocab,
                                  const std::string& regime) {
  Checkpoint ck;
  ck.spec = spec;
  ck.stats = stats;
  for (uint32_t cp : vocab.codepoints()) ck.vocab.add(cp);
  ck.regime = regime;
  for (auto& p : net.parameters()) ck.tensors.emplace(p.name, *p.value);
  return ck;
}

}  // namespace hanrec
