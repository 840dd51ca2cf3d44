#pragma once

#include <string>

#include "core/depth.hpp"

namespace panogeo {

// 16-bit grayscale depth: depth = raw * scale, raw 0 reserved for invalid.
// Valid depths must land in raw range [1, 65535] after rounding; values that
// round to 0 or saturate raise DomainError. Round-trip error is <= scale / 2.
DepthMap read_depth_png16(const std::string& path, double scale, DepthKind kind, MapFrame frame);
void write_depth_png16(const std::string& path, const DepthMap& d, double scale);

}  // namespace panogeo
