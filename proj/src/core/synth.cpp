#include "synth.hpp"

#include <cmath>

#include "error.hpp"
#include "parallel.hpp"
#include "spherical.hpp"

namespace panogeo {

namespace {

double axis(const Vec3& v, int i) { return i == 0 ? v.x : i == 1 ? v.y : v.z; }

Vec3 unit_axis(int i, double sign) {
  Vec3 v;
  (i == 0 ? v.x : i == 1 ? v.y : v.z) = sign;
  return v;
}

struct Tracer {
  TraceHit operator()(const SphereInterior& s) const { return {true, s.radius, -dir}; }

  TraceHit operator()(const BoxRoom& s) const {
    // Camera strictly inside, so every axis crossing has t > 0; the exit wall
    // is the smallest one. Ties (edge hits) resolve to the lowest axis.
    double best = 0.0;
    int best_axis = -1;
    for (int i = 0; i < 3; ++i) {
      double di = axis(dir, i);
      if (di == 0.0) continue;
      double wall = di > 0.0 ? axis(s.half_extents, i) : -axis(s.half_extents, i);
      double t = (wall - axis(s.camera, i)) / di;
      if (best_axis < 0 || t < best) {
        best = t;
        best_axis = i;
      }
    }
    return {true, best, unit_axis(best_axis, axis(dir, best_axis) > 0.0 ? -1.0 : 1.0)};
  }

  TraceHit operator()(const PlaneScene& s) const {
    double denom = dot(s.normal, dir);
    if (!(denom > 1e-12)) return {};
    return {true, s.offset / denom, -s.normal};
  }

  Vec3 dir;
};

Scene prepared(const Scene& s) {
  validate_scene(s);
  Scene out = s;
  if (auto* pl = std::get_if<PlaneScene>(&out)) pl->normal = normalized(pl->normal);
  return out;
}

}  // namespace

void validate_scene(const Scene& s) {
  if (const auto* sp = std::get_if<SphereInterior>(&s)) {
    if (!(std::isfinite(sp->radius) && sp->radius > 0.0))
      throw DomainError("sphere radius must be positive");
  } else if (const auto* box = std::get_if<BoxRoom>(&s)) {
    for (int i = 0; i < 3; ++i) {
      double he = axis(box->half_extents, i);
      if (!(std::isfinite(he) && he > 0.0)) throw DomainError("box half-extents must be positive");
      if (!(std::abs(axis(box->camera, i)) < he))
        throw DomainError("box camera must be strictly inside");
    }
  } else {
    const auto& pl = std::get<PlaneScene>(s);
    if (std::abs(norm(pl.normal) - 1.0) > 1e-6) throw DomainError("plane normal must be unit");
    if (!(std::isfinite(pl.offset) && pl.offset > 0.0))
      throw DomainError("plane offset must be positive");
  }
}

TraceHit trace_scene(const Scene& s, const Vec3& dir) {
  return std::visit(Tracer{normalized(dir)}, prepared(s));
}

std::pair<DepthCubemap, NormalCubemap> render_scene_faces(const Scene& s, int side) {
  const Scene sc = prepared(s);
  if (side < 2) throw DomainError("side must be >= 2");
  DepthCubemap dc;
  NormalCubemap nc;
  for (int fi = 0; fi < kFaceCount; ++fi) {
    FaceId f = static_cast<FaceId>(fi);
    DepthMap& d = dc.faces[fi];
    d.kind = DepthKind::Euclidean;
    d.frame = MapFrame::face_frame(f);
    d.data = Rasterd(side, side);
    d.valid = Mask(side, side, 0);
    NormalMap& n = nc.faces[fi];
    n.frame = NormalFrame::World;
    n.data = RasterV3(side, side);
    n.valid = Mask(side, side, 0);
    parallel_rows(side, [&, f](int y) {
      double vc = face_v_from_py(y, side);
      for (int x = 0; x < side; ++x) {
        Vec3 dir = face_dir_from_uv(f, face_u_from_px(x, side), vc);
        TraceHit hit = std::visit(Tracer{dir}, sc);
        if (!hit.hit) continue;
        d.data.at(x, y) = hit.t;
        d.valid.at(x, y) = 1;
        n.data.at(x, y) = hit.normal;
        n.valid.at(x, y) = 1;
      }
    });
  }
  return {std::move(dc), std::move(nc)};
}

std::pair<DepthMap, NormalMap> render_scene_erp(const Scene& s, int width) {
  const Scene sc = prepared(s);
  if (width < 4 || width % 2 != 0) throw DomainError("ERP width must be even and >= 4");
  int height = width / 2;
  DepthMap d;
  d.kind = DepthKind::Euclidean;
  d.frame = MapFrame::erp();
  d.data = Rasterd(width, height);
  d.valid = Mask(width, height, 0);
  NormalMap n;
  n.frame = NormalFrame::World;
  n.data = RasterV3(width, height);
  n.valid = Mask(width, height, 0);
  parallel_rows(height, [&](int y) {
    double v = 1.0 - (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      Vec3 dir = direction_from_angles(angles_from_erp_uv((x + 0.5) / width, v));
      TraceHit hit = std::visit(Tracer{dir}, sc);
      if (!hit.hit) continue;
      d.data.at(x, y) = hit.t;
      d.valid.at(x, y) = 1;
      n.data.at(x, y) = hit.normal;
      n.valid.at(x, y) = 1;
    }
  });
  return {std::move(d), std::move(n)};
}

}  // namespace panogeo
