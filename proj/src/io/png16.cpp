#include "png16.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <vector>

#include "core/error.hpp"

namespace panogeo {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("png16 scale must be positive");
}

}  // namespace

DepthMap read_depth_png16(const std::string& path, double scale, DepthKind kind, MapFrame frame) {
  check_scale(scale);
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path);

  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8))
    throw FormatError(path + ": not a PNG file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng allocation failed");
  }

  // Locals touched after setjmp stay POD; buffers live outside the jump path.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  bool jumped = false;

  if (setjmp(png_jmpbuf(png))) {
    jumped = true;
  } else {
    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);
    png_get_IHDR(png, info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (bit_depth == 16 && color_type == PNG_COLOR_TYPE_GRAY && w > 0 && h > 0) {
      pixels.resize(static_cast<std::size_t>(w) * h * 2);
      rows.resize(h);
      for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * 2;
      png_read_image(png, rows.data());
      png_read_end(png, nullptr);
    }
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (jumped) throw FormatError(path + ": PNG decode failed");
  if (bit_depth != 16 || color_type != PNG_COLOR_TYPE_GRAY)
    throw FormatError(path + ": expected 16-bit grayscale PNG");

  DepthMap d;
  d.kind = kind;
  d.frame = frame;
  d.data = Rasterd(static_cast<int>(w), static_cast<int>(h));
  d.valid = Mask(static_cast<int>(w), static_cast<int>(h), 0);
  for (std::size_t i = 0; i < d.data.size(); ++i) {
    unsigned raw = (static_cast<unsigned>(pixels[2 * i]) << 8) | pixels[2 * i + 1];
    if (raw == 0) continue;
    d.data.v[i] = raw * scale;
    d.valid.v[i] = 1;
  }
  return d;
}

void write_depth_png16(const std::string& path, const DepthMap& d, double scale) {
  check_scale(scale);
  if (d.data.empty()) throw DomainError("empty depth map");
  if (!d.data.same_shape(d.valid)) throw DomainError("depth/validity shape mismatch");

  const std::size_t n = d.data.size();
  std::vector<png_byte> pixels(n * 2, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!d.valid.v[i]) continue;  // raw 0 is the invalid sentinel
    double r = std::round(d.data.v[i] / scale);
    if (!(r >= 1.0)) throw DomainError("depth too small to encode at this scale");
    if (r > 65535.0) throw DomainError("depth saturates 16-bit range at this scale");
    unsigned raw = static_cast<unsigned>(r);
    pixels[2 * i] = static_cast<png_byte>(raw >> 8);
    pixels[2 * i + 1] = static_cast<png_byte>(raw & 0xff);
  }

  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot open " + path + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng allocation failed");
  }

  std::vector<png_bytep> rows(d.data.height);
  for (int y = 0; y < d.data.height; ++y)
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * d.data.width * 2;
  bool jumped = false;

  if (setjmp(png_jmpbuf(png))) {
    jumped = true;
  } else {
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, d.data.width, d.data.height, 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
  }
  png_destroy_write_struct(&png, &info);
  if (jumped) throw IoError(path + ": PNG encode failed");
}

}  // namespace panogeo
