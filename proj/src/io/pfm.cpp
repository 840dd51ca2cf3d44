#include "pfm.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include "core/error.hpp"

namespace panogeo {

namespace {

constexpr float kNaN = std::numeric_limits<float>::quiet_NaN();

std::vector<char> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return bytes;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string next_token(const std::vector<char>& b, std::size_t& pos) {
  while (pos < b.size() && is_space(b[pos])) ++pos;
  std::size_t start = pos;
  while (pos < b.size() && !is_space(b[pos])) ++pos;
  if (pos == start) throw FormatError("truncated header at byte " + std::to_string(start));
  return std::string(b.begin() + start, b.begin() + pos);
}

long parse_dim(const std::string& tok, std::size_t at) {
  char* end = nullptr;
  long v = std::strtol(tok.c_str(), &end, 10);
  if (!end || *end != '\0' || v <= 0)
    throw FormatError("bad dimension '" + tok + "' at byte " + std::to_string(at));
  return v;
}

struct PfmPayload {
  int width, height, channels;
  std::vector<float> samples;  // top row first, channels interleaved
};

PfmPayload read_payload(const std::string& path, int channels) {
  std::vector<char> bytes = slurp(path);
  std::size_t pos = 0;
  std::string magic = next_token(bytes, pos);
  const char* want = channels == 1 ? "Pf" : "PF";
  if (magic != want)
    throw FormatError(path + ": magic '" + magic + "', expected '" + want + "'");
  std::size_t at = pos;
  long w = parse_dim(next_token(bytes, pos), at);
  at = pos;
  long h = parse_dim(next_token(bytes, pos), at);
  at = pos;
  std::string stok = next_token(bytes, pos);
  char* end = nullptr;
  double scale = std::strtod(stok.c_str(), &end);
  if (!end || *end != '\0' || scale == 0.0 || !std::isfinite(scale))
    throw FormatError("bad scale '" + stok + "' at byte " + std::to_string(at));
  if (pos >= bytes.size() || !is_space(bytes[pos]))
    throw FormatError("missing whitespace after header at byte " + std::to_string(pos));
  ++pos;  // exactly one separator byte, then raw floats

  std::size_t need = static_cast<std::size_t>(w) * h * channels * 4;
  std::size_t have = bytes.size() - pos;
  if (have < need)
    throw FormatError(path + ": truncated payload at byte " + std::to_string(pos) + ": expected " +
                      std::to_string(need) + " bytes, got " + std::to_string(have));

  bool file_le = scale < 0.0;
  PfmPayload out{static_cast<int>(w), static_cast<int>(h), channels, {}};
  out.samples.resize(static_cast<std::size_t>(w) * h * channels);
  for (long row = 0; row < h; ++row) {
    long src_row = h - 1 - row;  // payload is bottom-up
    const char* src = bytes.data() + pos + static_cast<std::size_t>(src_row) * w * channels * 4;
    for (long i = 0; i < w * channels; ++i) {
      std::uint32_t u;
      std::memcpy(&u, src + i * 4, 4);
      if (file_le != (std::endian::native == std::endian::little)) u = __builtin_bswap32(u);
      float f;
      std::memcpy(&f, &u, 4);
      out.samples[static_cast<std::size_t>(row) * w * channels + i] = f;
    }
  }
  return out;
}

void write_payload(const std::string& path, int w, int h, int channels,
                   const std::vector<float>& samples) {
  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf) throw IoError("cannot open " + path + " for writing");
  outf << (channels == 1 ? "Pf" : "PF") << "\n" << w << " " << h << "\n" << "-1.0" << "\n";
  std::vector<char> row_bytes(static_cast<std::size_t>(w) * channels * 4);
  for (int row = h - 1; row >= 0; --row) {
    const float* src = samples.data() + static_cast<std::size_t>(row) * w * channels;
    for (int i = 0; i < w * channels; ++i) {
      std::uint32_t u;
      std::memcpy(&u, src + i, 4);
      if (std::endian::native != std::endian::little) u = __builtin_bswap32(u);
      std::memcpy(row_bytes.data() + static_cast<std::size_t>(i) * 4, &u, 4);
    }
    outf.write(row_bytes.data(), static_cast<std::streamsize>(row_bytes.size()));
  }
  if (!outf) throw IoError("write failed: " + path);
}

}  // namespace

Rasterd read_pfm(const std::string& path) {
  PfmPayload p = read_payload(path, 1);
  Rasterd img(p.width, p.height);
  for (std::size_t i = 0; i < img.size(); ++i) img.v[i] = p.samples[i];
  return img;
}

void write_pfm(const std::string& path, const Rasterd& img) {
  if (img.empty()) throw DomainError("empty raster");
  std::vector<float> samples(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) samples[i] = static_cast<float>(img.v[i]);
  write_payload(path, img.width, img.height, 1, samples);
}

RasterV3 read_pfm3(const std::string& path) {
  PfmPayload p = read_payload(path, 3);
  RasterV3 img(p.width, p.height);
  for (std::size_t i = 0; i < img.size(); ++i)
    img.v[i] = {p.samples[3 * i], p.samples[3 * i + 1], p.samples[3 * i + 2]};
  return img;
}

void write_pfm3(const std::string& path, const RasterV3& img) {
  if (img.empty()) throw DomainError("empty raster");
  std::vector<float> samples(img.size() * 3);
  for (std::size_t i = 0; i < img.size(); ++i) {
    samples[3 * i] = static_cast<float>(img.v[i].x);
    samples[3 * i + 1] = static_cast<float>(img.v[i].y);
    samples[3 * i + 2] = static_cast<float>(img.v[i].z);
  }
  write_payload(path, img.width, img.height, 3, samples);
}

DepthMap read_depth_pfm(const std::string& path, DepthKind kind, MapFrame frame) {
  DepthMap d;
  d.kind = kind;
  d.frame = frame;
  d.data = read_pfm(path);
  d.valid = Mask(d.data.width, d.data.height, 0);
  for (std::size_t i = 0; i < d.data.size(); ++i)
    if (std::isfinite(d.data.v[i])) d.valid.v[i] = 1;
  return d;
}

void write_depth_pfm(const std::string& path, const DepthMap& d) {
  if (d.data.empty()) throw DomainError("empty depth map");
  if (!d.data.same_shape(d.valid)) throw DomainError("depth/validity shape mismatch");
  Rasterd out = d.data;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!d.valid.v[i]) out.v[i] = kNaN;
  write_pfm(path, out);
}

NormalMap read_normals_pfm(const std::string& path, NormalFrame frame) {
  NormalMap n;
  n.frame = frame;
  n.data = read_pfm3(path);
  n.valid = Mask(n.data.width, n.data.height, 0);
  for (std::size_t i = 0; i < n.data.size(); ++i) {
    const Vec3& v = n.data.v[i];
    if (std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z)) n.valid.v[i] = 1;
  }
  return n;
}

void write_normals_pfm(const std::string& path, const NormalMap& n) {
  if (n.data.empty()) throw DomainError("empty normal map");
  if (!n.data.same_shape(n.valid)) throw DomainError("normal/validity shape mismatch");
  RasterV3 out = n.data;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!n.valid.v[i]) out.v[i] = {kNaN, kNaN, kNaN};
  write_pfm3(path, out);
}

}  // namespace panogeo
