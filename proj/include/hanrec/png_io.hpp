#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hanrec/error.hpp"
#include "hanrec/image.hpp"

// Minimal PNG codec over zlib: 8-bit grayscale/RGB(A), non-interlaced.
// Encoding uses filter 0 and a fixed deflate level, so identical pixels
// give identical bytes.

namespace hanrec {
namespace png_detail {

inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline uint32_t get_u32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | p[3];
}

inline void put_chunk(std::vector<uint8_t>& out, const char type[4],
                      const uint8_t* data, size_t len) {
  put_u32(out, static_cast<uint32_t>(len));
  size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  if (len) out.insert(out.end(), data, data + len);
  uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + start, static_cast<uInt>(4 + len));
  put_u32(out, crc);
}

inline int paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace png_detail

inline std::vector<uint8_t> encode_png(const Image& img) {
  if (img.c != 1 && img.c != 3)
    fail(Errc::Internal, "png encoder supports 1 or 3 channels");
  const size_t row = static_cast<size_t>(img.w) * img.c;
  std::vector<uint8_t> raw;
  raw.reserve((row + 1) * img.h);
  for (int y = 0; y < img.h; ++y) {
    raw.push_back(0);  // filter: none
    raw.insert(raw.end(), img.data.begin() + y * row, img.data.begin() + (y + 1) * row);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<uint8_t> zdata(bound);
  if (compress2(zdata.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    fail(Errc::Internal, "deflate failed");
  zdata.resize(bound);

  std::vector<uint8_t> out{0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  uint8_t ihdr[13];
  ihdr[0] = static_cast<uint8_t>(img.w >> 24); ihdr[1] = static_cast<uint8_t>(img.w >> 16);
  ihdr[2] = static_cast<uint8_t>(img.w >> 8);  ihdr[3] = static_cast<uint8_t>(img.w);
  ihdr[4] = static_cast<uint8_t>(img.h >> 24); ihdr[5] = static_cast<uint8_t>(img.h >> 16);
  ihdr[6] = static_cast<uint8_t>(img.h >> 8);  ihdr[7] = static_cast<uint8_t>(img.h);
  ihdr[8] = 8;                                   // bit depth
  ihdr[9] = (img.c == 1) ? 0 : 2;                // gray / truecolor
  ihdr[10] = 0; ihdr[11] = 0; ihdr[12] = 0;      // deflate, adaptive, no interlace
  png_detail::put_chunk(out, "IHDR", ihdr, 13);
  png_detail::put_chunk(out, "IDAT", zdata.data(), zdata.size());
  png_detail::put_chunk(out, "IEND", nullptr, 0);
  return out;
}

inline void write_png(const std::string& path, const Image& img) {
  auto bytes = encode_png(img);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(Errc::IoFailure, "cannot open for write: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(Errc::IoFailure, "short write: " + path);
}

inline Image decode_png(const std::vector<uint8_t>& bytes,
                        const std::string& origin = "<memory>") {
  using namespace png_detail;
  static const uint8_t sig[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0)
    fail(Errc::ParseError, "not a png: " + origin);
  size_t pos = 8;
  int w = 0, h = 0, color = -1, depth = 0, interlace = 0;
  std::vector<uint8_t> zdata;
  while (pos + 8 <= bytes.size()) {
    uint32_t len = get_u32(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) fail(Errc::ParseError, "truncated png: " + origin);
    std::string type(reinterpret_cast<const char*>(&bytes[pos + 4]), 4);
    const uint8_t* data = &bytes[pos + 8];
    if (type == "IHDR") {
      w = static_cast<int>(get_u32(data));
      h = static_cast<int>(get_u32(data + 4));
      depth = data[8];
      color = data[9];
      interlace = data[12];
    } else if (type == "IDAT") {
      zdata.insert(zdata.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (w <= 0 || h <= 0) fail(Errc::ParseError, "bad png header: " + origin);
  if (depth != 8 || interlace != 0)
    fail(Errc::ParseError, "unsupported png (need 8-bit non-interlaced): " + origin);
  int src_c;
  switch (color) {
    case 0: src_c = 1; break;
    case 2: src_c = 3; break;
    case 6: src_c = 4; break;
    default: fail(Errc::ParseError, "unsupported png color type: " + origin);
  }
  const size_t row = static_cast<size_t>(w) * src_c;
  std::vector<uint8_t> raw((row + 1) * h);
  uLongf rawlen = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &rawlen, zdata.data(), static_cast<uLong>(zdata.size())) != Z_OK ||
      rawlen != raw.size())
    fail(Errc::ParseError, "png inflate failed: " + origin);

  // unfilter in place (per-row filters 0..4)
  const int bpp = src_c;
  std::vector<uint8_t> prev(row, 0);
  Image out(h, w, src_c == 4 ? 3 : src_c);
  std::vector<uint8_t> line(row);
  for (int y = 0; y < h; ++y) {
    uint8_t filter = raw[y * (row + 1)];
    const uint8_t* src = &raw[y * (row + 1) + 1];
    for (size_t i = 0; i < row; ++i) {
      int a = i >= static_cast<size_t>(bpp) ? line[i - bpp] : 0;
      int b = prev[i];
      int c = i >= static_cast<size_t>(bpp) ? prev[i - bpp] : 0;
      int x = src[i];
      switch (filter) {
        case 0: break;
        case 1: x += a; break;
        case 2: x += b; break;
        case 3: x += (a + b) / 2; break;
        case 4: x += paeth(a, b, c); break;
        default: fail(Errc::ParseError, "bad png filter: " + origin);
      }
      line[i] = static_cast<uint8_t>(x);
    }
    prev = line;
    if (src_c == 4) {  // drop alpha, treat as opaque
      for (int x = 0; x < w; ++x)
        for (int ch = 0; ch < 3; ++ch) out.at(y, x, ch) = line[x * 4 + ch];
    } else {
      std::memcpy(&out.data[static_cast<size_t>(y) * w * out.c], line.data(), row);
    }
  }
  return out;
}

inline Image read_png(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::MissingImage, "cannot open: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                             std::istreambuf_iterator<char>());
  return decode_png(bytes, path);
}

}  // namespace hanrec
