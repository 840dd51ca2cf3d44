#pragma once

#include "raster.hpp"
#include "vec3.hpp"

namespace panogeo {

// Angles in radians. theta is longitude in [-pi, pi], measured from +Z toward
// +X; phi is latitude in [-pi/2, pi/2], positive toward +Y (up).
struct SphericalCoord {
  double theta = 0.0;
  double phi = 0.0;
};

// Equirectangular raster shape; width must equal 2 * height. Row 0 holds the
// north pole (v = 1), the bottom row the south pole.
struct ErpGrid {
  int width = 0;
  int height = 0;
};

bool erp_grid_ok(const ErpGrid& g);

// u = theta / 2pi + 0.5, v = phi / pi + 0.5. Throws DomainError outside the
// angle ranges above. u = 1 is reachable (theta = pi); sampling treats u
// periodically.
void erp_uv_from_angles(const SphericalCoord& sc, double& u, double& v);

// Inverse chart; u, v in [0, 1].
SphericalCoord angles_from_erp_uv(double u, double v);

// Unit direction (cos phi sin theta, sin phi, cos phi cos theta).
Vec3 direction_from_angles(const SphericalCoord& sc);

// Inverse; d must be unit within 1e-6. At the poles theta is reported as 0.
SphericalCoord angles_from_direction(const Vec3& d);

// Bilinear sample at chart point (u, v) with pixel centers at
// ((i + 0.5) / W, 1 - (j + 0.5) / H). u wraps periodically across the seam;
// the v interpolation row is clamped at the poles. v outside [0, 1] or an
// empty raster throws DomainError.
double bilinear_sample_erp(const Rasterd& img, double u, double v);

}  // namespace panogeo
