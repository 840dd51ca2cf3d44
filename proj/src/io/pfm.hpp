#pragma once

#include <string>

#include "core/depth.hpp"
#include "core/raster.hpp"

namespace panogeo {

// Portable FloatMap: "Pf" scalar or "PF" 3-channel, float32 payload stored
// bottom row first, scale sign giving byte order (negative = little endian).
// Writers emit little endian. Payload values pass through float32, which is
// the format's precision.
Rasterd read_pfm(const std::string& path);
void write_pfm(const std::string& path, const Rasterd& img);
RasterV3 read_pfm3(const std::string& path);
void write_pfm3(const std::string& path, const RasterV3& img);

// DepthMap/NormalMap wrappers using NaN as the invalid sentinel (any
// non-finite sample reads back invalid).
DepthMap read_depth_pfm(const std::string& path, DepthKind kind, MapFrame frame);
void write_depth_pfm(const std::string& path, const DepthMap& d);
NormalMap read_normals_pfm(const std::string& path, NormalFrame frame);
void write_normals_pfm(const std::string& path, const NormalMap& n);

}  // namespace panogeo
