#pragma once

#include <utility>
#include <variant>

#include "depth.hpp"
#include "vec3.hpp"

namespace panogeo {

// Camera at the center of a sphere of the given radius: depth is the radius
// in every direction.
struct SphereInterior {
  double radius = 1.0;
};

// Axis-aligned box [-half_extents, half_extents] seen from a camera strictly
// inside it. Rendering happens in the camera frame, so reported geometry is
// camera-centered.
struct BoxRoom {
  Vec3 half_extents{1, 1, 1};
  Vec3 camera{0, 0, 0};
};

// Plane { p : dot(normal, p) = offset } with a unit normal and offset > 0,
// camera at the origin. Rays with dot(normal, dir) <= 0 miss.
struct PlaneScene {
  Vec3 normal{0, 0, 1};
  double offset = 1.0;
};

using Scene = std::variant<SphereInterior, BoxRoom, PlaneScene>;

// DomainError on degenerate parameters (nonpositive radius or offset, camera
// outside the box, non-unit plane normal).
void validate_scene(const Scene& s);

struct TraceHit {
  bool hit = false;
  double t = 0.0;  // euclidean distance from the camera
  Vec3 normal;     // world frame, camera-facing
};

// Analytic intersection of the unit ray dir cast from the scene's camera.
TraceHit trace_scene(const Scene& s, const Vec3& dir);

// Euclidean depth plus world-frame normals at face pixel centers, side >= 2.
std::pair<DepthCubemap, NormalCubemap> render_scene_faces(const Scene& s, int side);

// The same at ERP pixel centers, width even >= 4.
std::pair<DepthMap, NormalMap> render_scene_erp(const Scene& s, int width);

}  // namespace panogeo
