#pragma once

#include <cstdint>
#include <vector>

#include "vec3.hpp"

namespace panogeo {

// Row-major grid; row 0 is the top image row. at(x, y) indexes column x of row y.
template <class T>
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<T> v;

  Raster() = default;
  Raster(int w, int h, T fill = T{})
      : width(w), height(h), v(static_cast<std::size_t>(w < 0 ? 0 : w) * (h < 0 ? 0 : h), fill) {}

  bool empty() const { return width <= 0 || height <= 0; }
  std::size_t size() const { return v.size(); }

  T& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }

  template <class U>
  bool same_shape(const Raster<U>& o) const {
    return width == o.width && height == o.height;
  }
};

using Rasterd = Raster<double>;
using RasterV3 = Raster<Vec3>;

// Validity mask: nonzero means valid.
using Mask = Raster<std::uint8_t>;

inline long count_valid(const Mask& m) {
  long n = 0;
  for (auto b : m.v) n += (b != 0);
  return n;
}

}  // namespace panogeo
