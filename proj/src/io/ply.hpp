#pragma once

#include <string>

#include "core/depth.hpp"

namespace panogeo {

enum class PlyFormat { Ascii, BinaryLE };

// Vertex-only PLY with float32 x y z, plus uchar red green blue when the
// cloud carries colors. Ascii floats are printed with enough digits to
// round-trip float32.
void write_ply(const std::string& path, const PointCloud& pc, PlyFormat fmt);

}  // namespace panogeo
