#pragma once

#include <string>
#include <utility>
#include <vector>

#include "core/depth.hpp"

namespace panogeo {

// Ordered key/value sidecar (meta.txt, one "key = value" per line). Unknown
// keys survive read/modify/write cycles in their original order.
struct SidecarMeta {
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
};

SidecarMeta read_sidecar(const std::string& path);
void write_sidecar(const std::string& path, const SidecarMeta& meta);

enum class StackFormat { Pfm, Png16 };

// A cubemap stack is a directory holding posx..negz face images plus
// meta.txt recording type, format, kind, side and the invalid sentinel
// (png16 additionally stores its scale). extra seeds written metadata so
// foreign keys carry over; scale is only read for png16.
void write_depth_stack(const std::string& dir, const DepthCubemap& cm, StackFormat fmt,
                       double scale = 0.0, const SidecarMeta* extra = nullptr);
DepthCubemap read_depth_stack(const std::string& dir, SidecarMeta* meta_out = nullptr);

void write_normal_stack(const std::string& dir, const NormalCubemap& nc,
                        const SidecarMeta* extra = nullptr);
NormalCubemap read_normal_stack(const std::string& dir, SidecarMeta* meta_out = nullptr);

}  // namespace panogeo
