#include "spherical.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace panogeo {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

bool erp_grid_ok(const ErpGrid& g) { return g.height >= 1 && g.width == 2 * g.height; }

void erp_uv_from_angles(const SphericalCoord& sc, double& u, double& v) {
  if (!(std::abs(sc.theta) <= kPi)) throw DomainError("theta outside [-pi, pi]");
  if (!(std::abs(sc.phi) <= kPi / 2)) throw DomainError("phi outside [-pi/2, pi/2]");
  u = sc.theta / (2.0 * kPi) + 0.5;
  v = sc.phi / kPi + 0.5;
}

SphericalCoord angles_from_erp_uv(double u, double v) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("u outside [0, 1]");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("v outside [0, 1]");
  return {(u - 0.5) * 2.0 * kPi, (v - 0.5) * kPi};
}

Vec3 direction_from_angles(const SphericalCoord& sc) {
  if (!(std::abs(sc.theta) <= kPi)) throw DomainError("theta outside [-pi, pi]");
  if (!(std::abs(sc.phi) <= kPi / 2)) throw DomainError("phi outside [-pi/2, pi/2]");
  double cp = std::cos(sc.phi);
  return {cp * std::sin(sc.theta), std::sin(sc.phi), cp * std::cos(sc.theta)};
}

SphericalCoord angles_from_direction(const Vec3& d) {
  double n = norm(d);
  if (std::abs(n - 1.0) > 1e-6) throw DomainError("direction is not unit length");
  if (d.x == 0.0 && d.z == 0.0) return {0.0, d.y > 0.0 ? kPi / 2 : -kPi / 2};
  return {std::atan2(d.x, d.z), std::asin(std::clamp(d.y, -1.0, 1.0))};
}

double bilinear_sample_erp(const Rasterd& img, double u, double v) {
  if (img.empty()) throw DomainError("empty raster");
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("v outside [0, 1]");
  u -= std::floor(u);
  if (u >= 1.0) u = 0.0;  // floor rounding can leave u == 1 for tiny negatives

  const int w = img.width, h = img.height;
  double x = u * w - 0.5;
  double y = (1.0 - v) * h - 0.5;
  double xf = std::floor(x), yf = std::floor(y);
  double fx = x - xf, fy = y - yf;

  int x0 = static_cast<int>(xf);
  int c0 = ((x0 % w) + w) % w;
  int c1 = (c0 + 1) % w;
  int y0 = static_cast<int>(yf);
  int r0 = std::clamp(y0, 0, h - 1);
  int r1 = std::clamp(y0 + 1, 0, h - 1);

  double top = img.at(c0, r0) * (1.0 - fx) + img.at(c1, r0) * fx;
  double bot = img.at(c0, r1) * (1.0 - fx) + img.at(c1, r1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

}  // namespace panogeo
