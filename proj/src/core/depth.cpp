#include "depth.hpp"

#include <algorithm>

#include "error.hpp"
#include "parallel.hpp"
#include "spherical.hpp"

namespace panogeo {

namespace {

const char* kKindNames[3] = {"planar_linear", "planar_log", "euclidean"};

void check_map(const DepthMap& d) {
  if (d.data.empty()) throw DomainError("empty depth map");
  if (!d.data.same_shape(d.valid)) throw DomainError("depth/validity shape mismatch");
}

void require_face_square(const DepthMap& d, const char* what) {
  if (!d.frame.is_face) throw DomainError(std::string(what) + " requires a face-frame map");
  if (d.data.width != d.data.height) throw DomainError(std::string(what) + " requires a square map");
}

void check_cube(const DepthCubemap& cm) {
  int side = cm.faces[0].data.width;
  for (const auto& f : cm.faces) {
    check_map(f);
    if (f.data.width != side || f.data.height != side)
      throw DomainError("cubemap faces must share one square shape");
    if (!f.frame.is_face) throw DomainError("cubemap faces must be face-frame maps");
  }
}

}  // namespace

const char* depth_kind_name(DepthKind k) { return kKindNames[static_cast<int>(k)]; }

DepthKind depth_kind_from_name(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kKindNames[i]) return static_cast<DepthKind>(i);
  throw DomainError("unknown depth kind: " + s);
}

DepthMap convert_depth(const DepthMap& d, DepthKind to) {
  check_map(d);
  DepthMap out = d;
  out.kind = to;
  if (to == d.kind) return out;

  bool crosses = (d.kind == DepthKind::Euclidean) != (to == DepthKind::Euclidean);
  int side = d.data.width;
  if (crosses) require_face_square(d, "planar/euclidean conversion");

  bool src_linear = d.kind != DepthKind::PlanarLog;
  for (int y = 0; y < d.data.height; ++y) {
    for (int x = 0; x < d.data.width; ++x) {
      if (!d.valid.at(x, y)) continue;
      double z = d.data.at(x, y);
      if (src_linear && !(z > 0.0)) throw DomainError("nonpositive depth at a valid pixel");
      double scale =
          crosses ? face_ray_scale(face_u_from_px(x, side), face_v_from_py(y, side)) : 1.0;
      double planar;
      switch (d.kind) {
        case DepthKind::PlanarLinear: planar = z; break;
        case DepthKind::PlanarLog: planar = std::exp(z); break;
        default: planar = z / scale; break;
      }
      switch (to) {
        case DepthKind::PlanarLinear: z = planar; break;
        case DepthKind::PlanarLog: z = std::log(planar); break;
        default: z = planar * scale; break;
      }
      out.data.at(x, y) = z;
    }
  }
  return out;
}

PointCloud depth_to_points(const DepthMap& d) {
  check_map(d);
  require_face_square(d, "depth_to_points");
  if (d.kind != DepthKind::PlanarLinear) throw DomainError("depth_to_points requires planar_linear");
  const FaceBasis& b = face_basis(d.frame.face);
  const int side = d.data.width;
  PointCloud pc;
  pc.points.reserve(count_valid(d.valid));
  for (int y = 0; y < side; ++y) {
    double vc = face_v_from_py(y, side);
    for (int x = 0; x < side; ++x) {
      if (!d.valid.at(x, y)) continue;
      double z = d.data.at(x, y);
      double uc = face_u_from_px(x, side);
      pc.points.push_back((uc * z) * b.right + (vc * z) * b.up + z * b.forward);
    }
  }
  return pc;
}

NormalMap depth_to_normals(const DepthMap& d) {
  check_map(d);
  require_face_square(d, "depth_to_normals");
  if (d.kind != DepthKind::PlanarLinear)
    throw DomainError("depth_to_normals requires planar_linear");
  const int side = d.data.width;
  if (side < 3) throw DomainError("depth_to_normals requires side >= 3");
  const FaceBasis& b = face_basis(d.frame.face);

  // Face-local unprojected positions; only valid entries are meaningful.
  RasterV3 pos(side, side);
  for (int y = 0; y < side; ++y) {
    double vc = face_v_from_py(y, side);
    for (int x = 0; x < side; ++x) {
      if (!d.valid.at(x, y)) continue;
      double z = d.data.at(x, y);
      pos.at(x, y) = {face_u_from_px(x, side) * z, vc * z, z};
    }
  }

  NormalMap nm;
  nm.frame = NormalFrame::World;
  nm.data = RasterV3(side, side);
  nm.valid = Mask(side, side, 0);

  // Second-order stencil along one axis: interior central, borders one-sided.
  auto stencil = [side](int i, int& a, int& bq, int& c, double& wa, double& wb, double& wc) {
    if (i == 0) {
      a = 0, bq = 1, c = 2, wa = -3.0, wb = 4.0, wc = -1.0;
    } else if (i == side - 1) {
      a = side - 1, bq = side - 2, c = side - 3, wa = 3.0, wb = -4.0, wc = 1.0;
    } else {
      a = i + 1, bq = i, c = i - 1, wa = 1.0, wb = 0.0, wc = -1.0;
    }
  };

  parallel_rows(side, [&](int y) {
    int ya, yb, yc;
    double wya, wyb, wyc;
    stencil(y, ya, yb, yc, wya, wyb, wyc);
    for (int x = 0; x < side; ++x) {
      if (!d.valid.at(x, y)) continue;
      int xa, xb, xc;
      double wxa, wxb, wxc;
      stencil(x, xa, xb, xc, wxa, wxb, wxc);
      if (!d.valid.at(xa, y) || !d.valid.at(xb, y) || !d.valid.at(xc, y)) continue;
      if (!d.valid.at(x, ya) || !d.valid.at(x, yb) || !d.valid.at(x, yc)) continue;
      Vec3 tx = wxa * pos.at(xa, y) + wxb * pos.at(xb, y) + wxc * pos.at(xc, y);
      Vec3 ty = wya * pos.at(x, ya) + wyb * pos.at(x, yb) + wyc * pos.at(x, yc);
      Vec3 n = cross(tx, ty);
      double len = norm(n);
      if (!(len > 1e-15)) continue;
      n = n / len;
      if (dot(n, pos.at(x, y)) > 0.0) n = -n;
      nm.data.at(x, y) = n.x * b.right + n.y * b.up + n.z * b.forward;
      nm.valid.at(x, y) = 1;
    }
  });
  return nm;
}

void apply_sky_mask(DepthMap& d, NormalMap* n, const SkyMask& sky) {
  check_map(d);
  if (!d.data.same_shape(sky.prob)) throw DomainError("sky probability shape mismatch");
  if (n && !n->data.same_shape(d.data)) throw DomainError("normal map shape mismatch");
  if (!(sky.threshold >= 0.0 && sky.threshold <= 1.0))
    throw DomainError("sky threshold outside [0, 1]");
  for (double p : sky.prob.v)
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sky probability outside [0, 1]");
  for (int y = 0; y < d.data.height; ++y) {
    for (int x = 0; x < d.data.width; ++x) {
      if (sky.prob.at(x, y) > sky.threshold) {
        d.valid.at(x, y) = 0;
        if (n) n->valid.at(x, y) = 0;
      }
    }
  }
}

DepthMap faces_to_erp_depth(const DepthCubemap& cm, int width) {
  check_cube(cm);
  for (const auto& f : cm.faces)
    if (f.kind != DepthKind::Euclidean) throw DomainError("faces_to_erp_depth requires euclidean faces");
  if (width < 4 || width % 2 != 0) throw DomainError("ERP width must be even and >= 4");
  const int side = cm.side();
  const int height = width / 2;

  DepthMap out;
  out.kind = DepthKind::Euclidean;
  out.frame = MapFrame::erp();
  out.data = Rasterd(width, height);
  out.valid = Mask(width, height, 0);

  parallel_rows(height, [&](int y) {
    double v = 1.0 - (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      double u = (x + 0.5) / width;
      Vec3 dir = direction_from_angles(angles_from_erp_uv(u, v));
      FaceHit hit = uv_face_from_dir(dir);
      const DepthMap& face = cm.faces[static_cast<int>(hit.face)];
      double px = face_px_from_u(hit.uc, side);
      double py = face_py_from_v(hit.vc, side);
      double xf = std::floor(px), yf = std::floor(py);
      double fx = px - xf, fy = py - yf;
      int x0 = std::clamp(static_cast<int>(xf), 0, side - 1);
      int x1 = std::clamp(static_cast<int>(xf) + 1, 0, side - 1);
      int y0 = std::clamp(static_cast<int>(yf), 0, side - 1);
      int y1 = std::clamp(static_cast<int>(yf) + 1, 0, side - 1);
      if (!face.valid.at(x0, y0) || !face.valid.at(x1, y0) || !face.valid.at(x0, y1) ||
          !face.valid.at(x1, y1))
        continue;
      double top = face.data.at(x0, y0) * (1.0 - fx) + face.data.at(x1, y0) * fx;
      double bot = face.data.at(x0, y1) * (1.0 - fx) + face.data.at(x1, y1) * fx;
      out.data.at(x, y) = top * (1.0 - fy) + bot * fy;
      out.valid.at(x, y) = 1;
    }
  });
  return out;
}

}  // namespace panogeo
