#include "ply.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "core/error.hpp"

namespace panogeo {

namespace {

void put_float_le(std::string& out, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  if (std::endian::native != std::endian::little) u = __builtin_bswap32(u);
  char b[4];
  std::memcpy(b, &u, 4);
  out.append(b, 4);
}

// Narrow through a real float object. A bare double->float->double chain
// (which varargs promotion creates) can be cancelled by gcc's vectorizer
// at -O3, leaking unrounded doubles into the file.
float f32(double x) {
  volatile float f = static_cast<float>(x);
  return f;
}

}  // namespace

void write_ply(const std::string& path, const PointCloud& pc, PlyFormat fmt) {
  if (!pc.colors.empty() && pc.colors.size() != pc.points.size())
    throw DomainError("color count does not match point count");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");

  const bool colored = !pc.colors.empty();
  out << "ply\n"
      << "format " << (fmt == PlyFormat::Ascii ? "ascii" : "binary_little_endian") << " 1.0\n"
      << "element vertex " << pc.points.size() << "\n"
      << "property float x\nproperty float y\nproperty float z\n";
  if (colored) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";

  if (fmt == PlyFormat::Ascii) {
    char line[128];
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
      const Vec3& p = pc.points[i];
      int len = std::snprintf(line, sizeof line, "%.9g %.9g %.9g", f32(p.x), f32(p.y), f32(p.z));
      out.write(line, len);
      if (colored) {
        len = std::snprintf(line, sizeof line, " %u %u %u", pc.colors[i][0], pc.colors[i][1],
                            pc.colors[i][2]);
        out.write(line, len);
      }
      out.put('\n');
    }
  } else {
    std::string buf;
    buf.reserve(pc.points.size() * (colored ? 15 : 12));
    for (std::size_t i = 0; i < pc.points.size(); ++i) {
      const Vec3& p = pc.points[i];
      put_float_le(buf, f32(p.x));
      put_float_le(buf, f32(p.y));
      put_float_le(buf, f32(p.z));
      if (colored)
        buf.append(reinterpret_cast<const char*>(pc.colors[i].data()), 3);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace panogeo
