#include "cubemap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "error.hpp"
#include "parallel.hpp"
#include "spherical.hpp"

namespace panogeo {

namespace {

const FaceBasis kBasis[kFaceCount] = {
    /* PosX */ {{0, 0, -1}, {0, 1, 0}, {1, 0, 0}},
    /* NegX */ {{0, 0, 1}, {0, 1, 0}, {-1, 0, 0}},
    /* PosY */ {{1, 0, 0}, {0, 0, -1}, {0, 1, 0}},
    /* NegY */ {{1, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    /* PosZ */ {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
    /* NegZ */ {{-1, 0, 0}, {0, 1, 0}, {0, 0, -1}},
};

const char* kFaceNames[kFaceCount] = {"posx", "negx", "posy", "negy", "posz", "negz"};
const char* kEdgeNames[4] = {"top", "bottom", "left", "right"};

// Clamped bilinear tap in pixel-index coordinates.
double bilinear_sample_face(const Rasterd& img, double x, double y) {
  double xf = std::floor(x), yf = std::floor(y);
  double fx = x - xf, fy = y - yf;
  int x0 = static_cast<int>(xf), y0 = static_cast<int>(yf);
  int c0 = std::clamp(x0, 0, img.width - 1);
  int c1 = std::clamp(x0 + 1, 0, img.width - 1);
  int r0 = std::clamp(y0, 0, img.height - 1);
  int r1 = std::clamp(y0 + 1, 0, img.height - 1);
  double top = img.at(c0, r0) * (1.0 - fx) + img.at(c1, r0) * fx;
  double bot = img.at(c0, r1) * (1.0 - fx) + img.at(c1, r1) * fx;
  return top * (1.0 - fy) + bot * fy;
}

void check_cubemap(const Cubemap& cm) {
  if (cm.side < 2) throw DomainError("cubemap side must be >= 2");
  for (const auto& f : cm.faces)
    if (f.width != cm.side || f.height != cm.side)
      throw DomainError("cubemap face shape does not match side");
}

}  // namespace

const char* face_name(FaceId f) { return kFaceNames[static_cast<int>(f)]; }

FaceId face_from_name(const std::string& s) {
  for (int i = 0; i < kFaceCount; ++i)
    if (s == kFaceNames[i]) return static_cast<FaceId>(i);
  throw DomainError("unknown face name: " + s);
}

const char* edge_name(EdgeId e) { return kEdgeNames[static_cast<int>(e)]; }

const FaceBasis& face_basis(FaceId f) { return kBasis[static_cast<int>(f)]; }

Vec3 face_dir_from_uv(FaceId f, double uc, double vc) {
  const FaceBasis& b = face_basis(f);
  return normalized(uc * b.right + vc * b.up + b.forward);
}

FaceHit uv_face_from_dir(const Vec3& d) {
  if (norm(d) < 1e-12) throw DomainError("zero direction");
  double best = -1.0;
  FaceId bf = FaceId::PosX;
  for (int i = 0; i < kFaceCount; ++i) {
    double a = dot(d, kBasis[i].forward);
    if (a > best) {
      best = a;
      bf = static_cast<FaceId>(i);
    }
  }
  const FaceBasis& b = kBasis[static_cast<int>(bf)];
  return {bf, dot(d, b.right) / best, dot(d, b.up) / best};
}

Cubemap erp_to_cubemap(const Rasterd& erp, int side) {
  if (!erp_grid_ok({erp.width, erp.height})) throw DomainError("raster is not a 2:1 ERP grid");
  if (side < 2) throw DomainError("side must be >= 2");
  Cubemap cm;
  cm.side = side;
  for (int fi = 0; fi < kFaceCount; ++fi) {
    Rasterd& face = cm.faces[fi];
    face = Rasterd(side, side);
    FaceId f = static_cast<FaceId>(fi);
    parallel_rows(side, [&, f](int y) {
      double vc = face_v_from_py(y, side);
      for (int x = 0; x < side; ++x) {
        Vec3 d = face_dir_from_uv(f, face_u_from_px(x, side), vc);
        double u, v;
        erp_uv_from_angles(angles_from_direction(d), u, v);
        face.at(x, y) = bilinear_sample_erp(erp, u, v);
      }
    });
  }
  return cm;
}

Rasterd cubemap_to_erp(const Cubemap& cm, int width) {
  check_cubemap(cm);
  if (width < 4 || width % 2 != 0) throw DomainError("ERP width must be even and >= 4");
  int height = width / 2;
  Rasterd out(width, height);
  parallel_rows(height, [&](int y) {
    double v = 1.0 - (y + 0.5) / height;
    for (int x = 0; x < width; ++x) {
      double u = (x + 0.5) / width;
      Vec3 d = direction_from_angles(angles_from_erp_uv(u, v));
      FaceHit hit = uv_face_from_dir(d);
      out.at(x, y) = bilinear_sample_face(cm.faces[static_cast<int>(hit.face)],
                                          face_px_from_u(hit.uc, cm.side),
                                          face_py_from_v(hit.vc, cm.side));
    }
  });
  return out;
}

Pixel border_pixel(EdgeId e, int idx, int depth, int side) {
  switch (e) {
    case EdgeId::Top: return {idx, depth};
    case EdgeId::Bottom: return {idx, side - 1 - depth};
    case EdgeId::Left: return {depth, idx};
    default: return {side - 1 - depth, idx};
  }
}

namespace {

constexpr int kProbeSide = 64;

struct ProbeResult {
  FaceId nf;
  EdgeId ne;
  double j;
};

// Continues the ray of the pixel one step outside (f, e) at border index i
// and locates it inside the neighboring face.
ProbeResult probe_outside(FaceId f, EdgeId e, int i) {
  double px = 0, py = 0;
  switch (e) {
    case EdgeId::Top: px = i, py = -1; break;
    case EdgeId::Bottom: px = i, py = kProbeSide; break;
    case EdgeId::Left: px = -1, py = i; break;
    case EdgeId::Right: px = kProbeSide, py = i; break;
  }
  Vec3 d = face_dir_from_uv(f, face_u_from_px(px, kProbeSide), face_v_from_py(py, kProbeSide));
  FaceHit hit = uv_face_from_dir(d);
  double xn = face_px_from_u(hit.uc, kProbeSide);
  double yn = face_py_from_v(hit.vc, kProbeSide);
  double dist[4] = {yn, (kProbeSide - 1) - yn, xn, (kProbeSide - 1) - xn};
  int ne = 0;
  for (int k = 1; k < 4; ++k)
    if (dist[k] < dist[ne]) ne = k;
  double j = (ne < 2) ? xn : yn;
  return {hit.face, static_cast<EdgeId>(ne), j};
}

EdgeAdjacency derive_adjacency() {
  EdgeAdjacency adj;
  for (int fi = 0; fi < kFaceCount; ++fi) {
    for (int ei = 0; ei < 4; ++ei) {
      FaceId f = static_cast<FaceId>(fi);
      EdgeId e = static_cast<EdgeId>(ei);
      ProbeResult a = probe_outside(f, e, 1);
      ProbeResult b = probe_outside(f, e, kProbeSide - 2);
      if (a.nf == f || a.nf != b.nf || a.ne != b.ne)
        throw std::logic_error("inconsistent adjacency probe");
      adj.link[fi][ei] = {a.nf, a.ne, b.j < a.j};
    }
  }
  for (int fi = 0; fi < kFaceCount; ++fi) {
    for (int ei = 0; ei < 4; ++ei) {
      const EdgeLink& l = adj.link[fi][ei];
      const EdgeLink& back = adj.at(l.nbr_face, l.nbr_edge);
      if (back.nbr_face != static_cast<FaceId>(fi) || back.nbr_edge != static_cast<EdgeId>(ei) ||
          back.reversed != l.reversed)
        throw std::logic_error("adjacency is not an involution");
    }
  }
  return adj;
}

}  // namespace

const EdgeAdjacency& cube_adjacency() {
  static const EdgeAdjacency adj = derive_adjacency();
  return adj;
}

std::array<Rasterd, kFaceCount> cross_face_pad(const Cubemap& cm, int pad, PadMode mode) {
  check_cubemap(cm);
  if (pad < 0 || pad > cm.side) throw DomainError("pad must be in [0, side]");
  const int s = cm.side, p = pad, os = s + 2 * p;
  std::array<Rasterd, kFaceCount> out;
  for (int fi = 0; fi < kFaceCount; ++fi) {
    out[fi] = Rasterd(os, os);
    const Rasterd& src = cm.faces[fi];
    for (int y = 0; y < s; ++y)
      for (int x = 0; x < s; ++x) out[fi].at(p + x, p + y) = src.at(x, y);
    if (p == 0 || mode == PadMode::Zero) continue;

    const auto& adj = cube_adjacency();
    for (int ei = 0; ei < 4; ++ei) {
      EdgeId e = static_cast<EdgeId>(ei);
      const EdgeLink& l = adj.at(static_cast<FaceId>(fi), e);
      const Rasterd& nbr = cm.faces[static_cast<int>(l.nbr_face)];
      for (int k = 0; k < p; ++k) {
        for (int i = 0; i < s; ++i) {
          int j = l.reversed ? s - 1 - i : i;
          Pixel q = border_pixel(l.nbr_edge, j, k, s);
          double val = nbr.at(q.x, q.y);
          switch (e) {
            case EdgeId::Top: out[fi].at(p + i, p - 1 - k) = val; break;
            case EdgeId::Bottom: out[fi].at(p + i, p + s + k) = val; break;
            case EdgeId::Left: out[fi].at(p - 1 - k, p + i) = val; break;
            case EdgeId::Right: out[fi].at(p + s + k, p + i) = val; break;
          }
        }
      }
    }
    for (int y = 0; y < p; ++y) {
      for (int x = 0; x < p; ++x) {
        out[fi].at(x, y) = out[fi].at(p, y);
        out[fi].at(p + s + x, y) = out[fi].at(p + s - 1, y);
        out[fi].at(x, p + s + y) = out[fi].at(p, p + s + y);
        out[fi].at(p + s + x, p + s + y) = out[fi].at(p + s - 1, p + s + y);
      }
    }
  }
  return out;
}

}  // namespace panogeo
