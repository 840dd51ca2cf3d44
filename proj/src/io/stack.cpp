#include "stack.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"
#include "pfm.hpp"
#include "png16.hpp"

namespace panogeo {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::string& require_key(const SidecarMeta& meta, const std::string& key,
                               const std::string& where) {
  const std::string* v = meta.find(key);
  if (!v) throw FormatError(where + ": missing sidecar key '" + key + "'");
  return *v;
}

double parse_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (!end || end == s.c_str() || *end != '\0')
    throw FormatError("bad " + what + " value '" + s + "'");
  return v;
}

std::string face_file(const std::string& dir, int face, StackFormat fmt) {
  return dir + "/" + face_name(static_cast<FaceId>(face)) +
         (fmt == StackFormat::Pfm ? ".pfm" : ".png");
}

void set_common_keys(SidecarMeta& meta, const char* type, StackFormat fmt, int side) {
  meta.set("type", type);
  meta.set("format", fmt == StackFormat::Pfm ? "pfm" : "png16");
  meta.set("side", std::to_string(side));
  std::string order;
  for (int i = 0; i < kFaceCount; ++i) {
    if (i) order += " ";
    order += face_name(static_cast<FaceId>(i));
  }
  meta.set("face_order", order);
  meta.set("invalid", fmt == StackFormat::Pfm ? "nan" : "0");
}

}  // namespace

const std::string* SidecarMeta::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

void SidecarMeta::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries.emplace_back(key, value);
}

SidecarMeta read_sidecar(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  SidecarMeta meta;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw FormatError(path + ":" + std::to_string(lineno) + ": empty key");
    meta.entries.emplace_back(key, trim(t.substr(eq + 1)));
  }
  return meta;
}

void write_sidecar(const std::string& path, const SidecarMeta& meta) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& [k, v] : meta.entries) out << k << " = " << v << "\n";
  if (!out) throw IoError("write failed: " + path);
}

void write_depth_stack(const std::string& dir, const DepthCubemap& cm, StackFormat fmt,
                       double scale, const SidecarMeta* extra) {
  const int side = cm.side();
  for (const auto& f : cm.faces) {
    if (f.data.empty() || f.data.width != side || f.data.height != side)
      throw DomainError("cubemap faces must share one square shape");
    if (f.kind != cm.faces[0].kind) throw DomainError("cubemap faces must share one depth kind");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  SidecarMeta meta = extra ? *extra : SidecarMeta{};
  set_common_keys(meta, "depth", fmt, side);
  meta.set("kind", depth_kind_name(cm.faces[0].kind));
  if (fmt == StackFormat::Png16) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", scale);
    meta.set("scale", buf);
  }
  for (int i = 0; i < kFaceCount; ++i) {
    if (fmt == StackFormat::Pfm)
      write_depth_pfm(face_file(dir, i, fmt), cm.faces[i]);
    else
      write_depth_png16(face_file(dir, i, fmt), cm.faces[i], scale);
  }
  write_sidecar(dir + "/meta.txt", meta);
}

DepthCubemap read_depth_stack(const std::string& dir, SidecarMeta* meta_out) {
  SidecarMeta meta = read_sidecar(dir + "/meta.txt");
  if (require_key(meta, "type", dir) != "depth")
    throw FormatError(dir + ": sidecar type is not 'depth'");
  const std::string& fmt_s = require_key(meta, "format", dir);
  StackFormat fmt;
  if (fmt_s == "pfm")
    fmt = StackFormat::Pfm;
  else if (fmt_s == "png16")
    fmt = StackFormat::Png16;
  else
    throw FormatError(dir + ": unknown stack format '" + fmt_s + "'");
  DepthKind kind;
  try {
    kind = depth_kind_from_name(require_key(meta, "kind", dir));
  } catch (const DomainError& e) {
    throw FormatError(dir + ": " + e.what());
  }
  double scale = 0.0;
  if (fmt == StackFormat::Png16) scale = parse_double(require_key(meta, "scale", dir), "scale");

  DepthCubemap cm;
  for (int i = 0; i < kFaceCount; ++i) {
    std::string path = face_file(dir, i, fmt);
    if (!fs::exists(path))
      throw IoError(dir + ": missing face file " + face_name(static_cast<FaceId>(i)));
    MapFrame frame = MapFrame::face_frame(static_cast<FaceId>(i));
    cm.faces[i] = fmt == StackFormat::Pfm ? read_depth_pfm(path, kind, frame)
                                          : read_depth_png16(path, scale, kind, frame);
    const DepthMap& f = cm.faces[i];
    if (f.data.width != f.data.height || f.data.width != cm.faces[0].data.width)
      throw FormatError(dir + ": face " + face_name(static_cast<FaceId>(i)) +
                        " disagrees in resolution");
  }
  if (meta_out) *meta_out = std::move(meta);
  return cm;
}

void write_normal_stack(const std::string& dir, const NormalCubemap& nc,
                        const SidecarMeta* extra) {
  const int side = nc.side();
  for (const auto& f : nc.faces) {
    if (f.data.empty() || f.data.width != side || f.data.height != side)
      throw DomainError("cubemap faces must share one square shape");
    if (f.frame != nc.faces[0].frame) throw DomainError("normal faces must share one frame");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());

  SidecarMeta meta = extra ? *extra : SidecarMeta{};
  set_common_keys(meta, "normals", StackFormat::Pfm, side);
  meta.set("frame", nc.faces[0].frame == NormalFrame::World ? "world" : "face_local");
  for (int i = 0; i < kFaceCount; ++i)
    write_normals_pfm(face_file(dir, i, StackFormat::Pfm), nc.faces[i]);
  write_sidecar(dir + "/meta.txt", meta);
}

NormalCubemap read_normal_stack(const std::string& dir, SidecarMeta* meta_out) {
  SidecarMeta meta = read_sidecar(dir + "/meta.txt");
  if (require_key(meta, "type", dir) != "normals")
    throw FormatError(dir + ": sidecar type is not 'normals'");
  const std::string& frame_s = require_key(meta, "frame", dir);
  NormalFrame frame;
  if (frame_s == "world")
    frame = NormalFrame::World;
  else if (frame_s == "face_local")
    frame = NormalFrame::FaceLocal;
  else
    throw FormatError(dir + ": unknown normal frame '" + frame_s + "'");

  NormalCubemap nc;
  for (int i = 0; i < kFaceCount; ++i) {
    std::string path = face_file(dir, i, StackFormat::Pfm);
    if (!fs::exists(path))
      throw IoError(dir + ": missing face file " + face_name(static_cast<FaceId>(i)));
    nc.faces[i] = read_normals_pfm(path, frame);
    const NormalMap& f = nc.faces[i];
    if (f.data.width != f.data.height || f.data.width != nc.faces[0].data.width)
      throw FormatError(dir + ": face " + face_name(static_cast<FaceId>(i)) +
                        " disagrees in resolution");
  }
  if (meta_out) *meta_out = std::move(meta);
  return nc;
}

}  // namespace panogeo
