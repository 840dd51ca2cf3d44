#include "panogeo.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <string>
#include <utility>

#include "core/align.hpp"
#include "core/cubemap.hpp"
#include "core/depth.hpp"
#include "core/error.hpp"
#include "core/losses.hpp"
#include "core/metrics.hpp"
#include "core/parallel.hpp"
#include "core/spherical.hpp"
#include "core/synth.hpp"
#include "io/pfm.hpp"
#include "io/ply.hpp"
#include "io/png16.hpp"
#include "io/stack.hpp"

using namespace panogeo;

struct pgr_raster {
  Rasterd v;
};
struct pgr_depth {
  DepthMap v;
};
struct pgr_normals {
  NormalMap v;
};
struct pgr_cubemap {
  Cubemap v;
};
struct pgr_depth_cube {
  DepthCubemap v;
};
struct pgr_normal_cube {
  NormalCubemap v;
};
struct pgr_cloud {
  PointCloud v;
};
struct pgr_scene {
  Scene v;
};

namespace {

thread_local std::string g_last_error;

template <class F>
pgr_status guarded(F&& f) {
  try {
    f();
    return PGR_OK;
  } catch (const DomainError& e) {
    g_last_error = e.what();
    return PGR_ERR_DOMAIN;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return PGR_ERR_IO;
  } catch (const FormatError& e) {
    g_last_error = e.what();
    return PGR_ERR_FORMAT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PGR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return PGR_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

FaceId to_face(int face) {
  require(face >= 0 && face < PGR_FACE_COUNT, "face index out of range");
  return static_cast<FaceId>(face);
}

EdgeId to_edge(int edge) {
  require(edge >= 0 && edge < 4, "edge index out of range");
  return static_cast<EdgeId>(edge);
}

DepthKind to_kind(int kind) {
  require(kind >= 0 && kind <= 2, "unknown depth kind");
  return static_cast<DepthKind>(kind);
}

MapFrame to_frame(int frame) {
  if (frame == PGR_FRAME_ERP) return MapFrame::erp();
  return MapFrame::face_frame(to_face(frame));
}

int from_frame(const MapFrame& f) {
  return f.is_face ? static_cast<int>(f.face) : PGR_FRAME_ERP;
}

NormalFrame to_nframe(int frame) {
  require(frame == PGR_NORMAL_FRAME_WORLD || frame == PGR_NORMAL_FRAME_FACE_LOCAL,
          "unknown normal frame");
  return frame == PGR_NORMAL_FRAME_WORLD ? NormalFrame::World : NormalFrame::FaceLocal;
}

Vec3 to_vec(const double p[3]) {
  require(p != nullptr, "null vector argument");
  return {p[0], p[1], p[2]};
}

void store_vec(double out[3], const Vec3& v) {
  out[0] = v.x;
  out[1] = v.y;
  out[2] = v.z;
}

LossWeights to_weights(const pgr_loss_weights* w) {
  if (!w) return {};
  return {w->lambda_l1,  w->lambda_c,     w->lambda_grad, w->lambda_norm, w->lambda_cos,
          w->lambda_perc, w->lambda_bce,  w->lambda_focal, w->lambda_dice, w->focal_gamma};
}

}  // namespace

extern "C" {

const char* pgr_last_error(void) { return g_last_error.c_str(); }
const char* pgr_version(void) { return "0.1.0"; }

void pgr_set_threads(int n) { set_thread_count(n); }
int pgr_threads(void) { return thread_count(); }

double pgr_default_seam_tau(void) { return kDefaultSeamTau; }
double pgr_default_seam_gamma(void) { return kDefaultSeamGamma; }
double pgr_default_range_lo(void) { return kDefaultRangeLo; }
double pgr_default_range_hi(void) { return kDefaultRangeHi; }
int pgr_default_anchor_factor(void) { return kDefaultAnchorFactor; }
double pgr_default_sky_threshold(void) { return 0.5; }

void pgr_raster_free(pgr_raster* p) { delete p; }
void pgr_depth_free(pgr_depth* p) { delete p; }
void pgr_normals_free(pgr_normals* p) { delete p; }
void pgr_cubemap_free(pgr_cubemap* p) { delete p; }
void pgr_depth_cube_free(pgr_depth_cube* p) { delete p; }
void pgr_normal_cube_free(pgr_normal_cube* p) { delete p; }
void pgr_cloud_free(pgr_cloud* p) { delete p; }
void pgr_scene_free(pgr_scene* p) { delete p; }

/* ---- rasters ----------------------------------------------------------- */

pgr_status pgr_raster_create(int width, int height, const double* data, pgr_raster** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(width > 0 && height > 0, "raster extents must be positive");
    auto r = new pgr_raster{Rasterd(width, height)};
    if (data) std::memcpy(r->v.v.data(), data, r->v.size() * sizeof(double));
    *out = r;
  });
}

int pgr_raster_width(const pgr_raster* r) { return r ? r->v.width : 0; }
int pgr_raster_height(const pgr_raster* r) { return r ? r->v.height : 0; }
double* pgr_raster_data(pgr_raster* r) { return r ? r->v.v.data() : nullptr; }
const double* pgr_raster_data_const(const pgr_raster* r) { return r ? r->v.v.data() : nullptr; }

/* ---- depth maps -------------------------------------------------------- */

pgr_status pgr_depth_create(int width, int height, int kind, int frame, const double* data,
                            const unsigned char* valid, pgr_depth** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(width > 0 && height > 0, "depth extents must be positive");
    auto d = new pgr_depth;
    d->v.kind = to_kind(kind);
    d->v.frame = to_frame(frame);
    d->v.data = Rasterd(width, height);
    d->v.valid = Mask(width, height, 1);
    if (data) std::memcpy(d->v.data.v.data(), data, d->v.data.size() * sizeof(double));
    if (valid) std::memcpy(d->v.valid.v.data(), valid, d->v.valid.size());
    *out = d;
  });
}

int pgr_depth_width(const pgr_depth* d) { return d ? d->v.data.width : 0; }
int pgr_depth_height(const pgr_depth* d) { return d ? d->v.data.height : 0; }
int pgr_depth_kind(const pgr_depth* d) { return d ? static_cast<int>(d->v.kind) : -1; }
int pgr_depth_frame(const pgr_depth* d) { return d ? from_frame(d->v.frame) : PGR_FRAME_ERP; }
double* pgr_depth_data(pgr_depth* d) { return d ? d->v.data.v.data() : nullptr; }
unsigned char* pgr_depth_valid(pgr_depth* d) { return d ? d->v.valid.v.data() : nullptr; }

/* ---- normal maps ------------------------------------------------------- */

pgr_status pgr_normals_create(int width, int height, int frame, const double* xyz,
                              const unsigned char* valid, pgr_normals** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(width > 0 && height > 0, "normal map extents must be positive");
    auto n = new pgr_normals;
    n->v.frame = to_nframe(frame);
    n->v.data = RasterV3(width, height);
    n->v.valid = Mask(width, height, 1);
    if (xyz) std::memcpy(n->v.data.v.data(), xyz, n->v.data.size() * sizeof(Vec3));
    if (valid) std::memcpy(n->v.valid.v.data(), valid, n->v.valid.size());
    *out = n;
  });
}

int pgr_normals_width(const pgr_normals* n) { return n ? n->v.data.width : 0; }
int pgr_normals_height(const pgr_normals* n) { return n ? n->v.data.height : 0; }
int pgr_normals_frame(const pgr_normals* n) {
  return n && n->v.frame == NormalFrame::FaceLocal ? PGR_NORMAL_FRAME_FACE_LOCAL
                                                   : PGR_NORMAL_FRAME_WORLD;
}
double* pgr_normals_data(pgr_normals* n) {
  return n ? reinterpret_cast<double*>(n->v.data.v.data()) : nullptr;
}
unsigned char* pgr_normals_valid(pgr_normals* n) { return n ? n->v.valid.v.data() : nullptr; }

/* ---- spherical chart --------------------------------------------------- */

pgr_status pgr_erp_uv_from_angles(double theta, double phi, double* u, double* v) {
  return guarded([&] {
    require(u && v, "null out pointer");
    erp_uv_from_angles({theta, phi}, *u, *v);
  });
}

pgr_status pgr_angles_from_erp_uv(double u, double v, double* theta, double* phi) {
  return guarded([&] {
    require(theta && phi, "null out pointer");
    SphericalCoord sc = angles_from_erp_uv(u, v);
    *theta = sc.theta;
    *phi = sc.phi;
  });
}

pgr_status pgr_direction_from_angles(double theta, double phi, double dir[3]) {
  return guarded([&] {
    require(dir != nullptr, "null out pointer");
    store_vec(dir, direction_from_angles({theta, phi}));
  });
}

pgr_status pgr_angles_from_direction(const double dir[3], double* theta, double* phi) {
  return guarded([&] {
    require(theta && phi, "null out pointer");
    SphericalCoord sc = angles_from_direction(to_vec(dir));
    *theta = sc.theta;
    *phi = sc.phi;
  });
}

pgr_status pgr_bilinear_sample_erp(const pgr_raster* img, double u, double v, double* out) {
  return guarded([&] {
    require(img && out, "null argument");
    *out = bilinear_sample_erp(img->v, u, v);
  });
}

/* ---- cubemap ----------------------------------------------------------- */

pgr_status pgr_cubemap_create(int side, pgr_cubemap** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(side >= 2, "side must be >= 2");
    auto cm = new pgr_cubemap;
    cm->v.side = side;
    for (auto& f : cm->v.faces) f = Rasterd(side, side);
    *out = cm;
  });
}

int pgr_cubemap_side(const pgr_cubemap* cm) { return cm ? cm->v.side : 0; }

pgr_status pgr_cubemap_set_face(pgr_cubemap* cm, int face, const pgr_raster* img) {
  return guarded([&] {
    require(cm && img, "null argument");
    FaceId f = to_face(face);
    require(img->v.width == cm->v.side && img->v.height == cm->v.side,
            "face shape does not match side");
    cm->v.faces[static_cast<int>(f)] = img->v;
  });
}

pgr_status pgr_cubemap_get_face(const pgr_cubemap* cm, int face, pgr_raster** out) {
  return guarded([&] {
    require(cm && out, "null argument");
    *out = new pgr_raster{cm->v.faces[static_cast<int>(to_face(face))]};
  });
}

pgr_status pgr_face_dir_from_uv(int face, double uc, double vc, double dir[3]) {
  return guarded([&] {
    require(dir != nullptr, "null out pointer");
    store_vec(dir, face_dir_from_uv(to_face(face), uc, vc));
  });
}

pgr_status pgr_uv_face_from_dir(const double dir[3], int* face, double* uc, double* vc) {
  return guarded([&] {
    require(face && uc && vc, "null out pointer");
    FaceHit hit = uv_face_from_dir(to_vec(dir));
    *face = static_cast<int>(hit.face);
    *uc = hit.uc;
    *vc = hit.vc;
  });
}

pgr_status pgr_erp_to_cubemap(const pgr_raster* erp, int side, pgr_cubemap** out) {
  return guarded([&] {
    require(erp && out, "null argument");
    *out = new pgr_cubemap{erp_to_cubemap(erp->v, side)};
  });
}

pgr_status pgr_cubemap_to_erp(const pgr_cubemap* cm, int width, pgr_raster** out) {
  return guarded([&] {
    require(cm && out, "null argument");
    *out = new pgr_raster{cubemap_to_erp(cm->v, width)};
  });
}

pgr_status pgr_cube_adjacency(int face, int edge, int* nbr_face, int* nbr_edge, int* reversed) {
  return guarded([&] {
    require(nbr_face && nbr_edge && reversed, "null out pointer");
    const EdgeLink& l = cube_adjacency().at(to_face(face), to_edge(edge));
    *nbr_face = static_cast<int>(l.nbr_face);
    *nbr_edge = static_cast<int>(l.nbr_edge);
    *reversed = l.reversed ? 1 : 0;
  });
}

pgr_status pgr_cross_face_pad(const pgr_cubemap* cm, int pad, int mode, int face,
                              pgr_raster** out) {
  return guarded([&] {
    require(cm && out, "null argument");
    require(mode == PGR_PAD_CROSS_FACE || mode == PGR_PAD_ZERO, "unknown pad mode");
    FaceId f = to_face(face);
    auto padded = cross_face_pad(cm->v, pad,
                                 mode == PGR_PAD_ZERO ? PadMode::Zero : PadMode::CrossFace);
    *out = new pgr_raster{std::move(padded[static_cast<int>(f)])};
  });
}

/* ---- depth/normal cubes ------------------------------------------------ */

pgr_status pgr_depth_cube_create(int side, int kind, pgr_depth_cube** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(side >= 2, "side must be >= 2");
    auto dc = new pgr_depth_cube;
    for (int i = 0; i < kFaceCount; ++i) {
      DepthMap& f = dc->v.faces[i];
      f.kind = to_kind(kind);
      f.frame = MapFrame::face_frame(static_cast<FaceId>(i));
      f.data = Rasterd(side, side);
      f.valid = Mask(side, side, 0);
    }
    *out = dc;
  });
}

int pgr_depth_cube_side(const pgr_depth_cube* dc) { return dc ? dc->v.side() : 0; }
int pgr_depth_cube_kind(const pgr_depth_cube* dc) {
  return dc ? static_cast<int>(dc->v.faces[0].kind) : -1;
}

pgr_status pgr_depth_cube_set_face(pgr_depth_cube* dc, int face, const pgr_depth* d) {
  return guarded([&] {
    require(dc && d, "null argument");
    FaceId f = to_face(face);
    require(d->v.data.width == dc->v.side() && d->v.data.height == dc->v.side(),
            "face shape does not match side");
    require(d->v.kind == dc->v.faces[0].kind, "face kind does not match cube kind");
    require(d->v.frame.is_face && d->v.frame.face == f, "face frame does not match slot");
    dc->v.faces[static_cast<int>(f)] = d->v;
  });
}

pgr_status pgr_depth_cube_get_face(const pgr_depth_cube* dc, int face, pgr_depth** out) {
  return guarded([&] {
    require(dc && out, "null argument");
    *out = new pgr_depth{dc->v.faces[static_cast<int>(to_face(face))]};
  });
}

pgr_status pgr_normal_cube_create(int side, int frame, pgr_normal_cube** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    require(side >= 2, "side must be >= 2");
    auto nc = new pgr_normal_cube;
    for (int i = 0; i < kFaceCount; ++i) {
      NormalMap& f = nc->v.faces[i];
      f.frame = to_nframe(frame);
      f.data = RasterV3(side, side);
      f.valid = Mask(side, side, 0);
    }
    *out = nc;
  });
}

int pgr_normal_cube_side(const pgr_normal_cube* nc) { return nc ? nc->v.side() : 0; }

pgr_status pgr_normal_cube_set_face(pgr_normal_cube* nc, int face, const pgr_normals* n) {
  return guarded([&] {
    require(nc && n, "null argument");
    FaceId f = to_face(face);
    require(n->v.data.width == nc->v.side() && n->v.data.height == nc->v.side(),
            "face shape does not match side");
    require(n->v.frame == nc->v.faces[0].frame, "face frame does not match cube frame");
    nc->v.faces[static_cast<int>(f)] = n->v;
  });
}

pgr_status pgr_normal_cube_get_face(const pgr_normal_cube* nc, int face, pgr_normals** out) {
  return guarded([&] {
    require(nc && out, "null argument");
    *out = new pgr_normals{nc->v.faces[static_cast<int>(to_face(face))]};
  });
}

pgr_status pgr_depth_cube_from_cubemap(const pgr_cubemap* cm, int kind, pgr_depth_cube** out) {
  return guarded([&] {
    require(cm && out, "null argument");
    DepthKind k = to_kind(kind);
    auto dc = new pgr_depth_cube;
    for (int i = 0; i < kFaceCount; ++i) {
      DepthMap& f = dc->v.faces[i];
      f.kind = k;
      f.frame = MapFrame::face_frame(static_cast<FaceId>(i));
      f.data = cm->v.faces[i];
      f.valid = Mask(f.data.width, f.data.height, 0);
      for (std::size_t j = 0; j < f.data.size(); ++j)
        if (std::isfinite(f.data.v[j])) f.valid.v[j] = 1;
    }
    *out = dc;
  });
}

pgr_status pgr_cubemap_from_depth_cube(const pgr_depth_cube* dc, pgr_cubemap** out) {
  return guarded([&] {
    require(dc && out, "null argument");
    auto cm = new pgr_cubemap;
    cm->v.side = dc->v.side();
    for (int i = 0; i < kFaceCount; ++i) {
      cm->v.faces[i] = dc->v.faces[i].data;
      for (std::size_t j = 0; j < cm->v.faces[i].size(); ++j)
        if (!dc->v.faces[i].valid.v[j])
          cm->v.faces[i].v[j] = std::numeric_limits<double>::quiet_NaN();
    }
    *out = cm;
  });
}

/* ---- geometry ---------------------------------------------------------- */

pgr_status pgr_convert_depth(const pgr_depth* d, int to_kind_, pgr_depth** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new pgr_depth{convert_depth(d->v, to_kind(to_kind_))};
  });
}

pgr_status pgr_depth_to_points(const pgr_depth* d, pgr_cloud** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new pgr_cloud{depth_to_points(d->v)};
  });
}

pgr_status pgr_depth_to_normals(const pgr_depth* d, pgr_normals** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new pgr_normals{depth_to_normals(d->v)};
  });
}

pgr_status pgr_apply_sky_mask(pgr_depth* d, pgr_normals* n, const pgr_raster* prob,
                              double threshold) {
  return guarded([&] {
    require(d && prob, "null argument");
    apply_sky_mask(d->v, n ? &n->v : nullptr, {prob->v, threshold});
  });
}

pgr_status pgr_faces_to_erp_depth(const pgr_depth_cube* cm, int width, pgr_depth** out) {
  return guarded([&] {
    require(cm && out, "null argument");
    *out = new pgr_depth{faces_to_erp_depth(cm->v, width)};
  });
}

/* ---- point clouds ------------------------------------------------------ */

long pgr_cloud_size(const pgr_cloud* pc) { return pc ? static_cast<long>(pc->v.points.size()) : 0; }

const double* pgr_cloud_points(const pgr_cloud* pc) {
  return pc && !pc->v.points.empty() ? &pc->v.points[0].x : nullptr;
}

pgr_status pgr_cloud_merge(pgr_cloud* dst, const pgr_cloud* src) {
  return guarded([&] {
    require(dst && src, "null argument");
    require(dst->v.colors.empty() == src->v.colors.empty(),
            "cannot merge colored with colorless cloud");
    dst->v.points.insert(dst->v.points.end(), src->v.points.begin(), src->v.points.end());
    dst->v.colors.insert(dst->v.colors.end(), src->v.colors.begin(), src->v.colors.end());
  });
}

pgr_status pgr_cloud_set_colors(pgr_cloud* pc, const unsigned char* rgb) {
  return guarded([&] {
    require(pc != nullptr, "null argument");
    pc->v.colors.clear();
    if (!rgb) return;
    pc->v.colors.resize(pc->v.points.size());
    std::memcpy(pc->v.colors.data(), rgb, pc->v.colors.size() * 3);
  });
}

/* ---- analytic scenes --------------------------------------------------- */

pgr_status pgr_scene_sphere(double radius, pgr_scene** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    Scene s = SphereInterior{radius};
    validate_scene(s);
    *out = new pgr_scene{std::move(s)};
  });
}

pgr_status pgr_scene_box(const double half_extents[3], const double camera[3], pgr_scene** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    Scene s = BoxRoom{to_vec(half_extents), camera ? to_vec(camera) : Vec3{}};
    validate_scene(s);
    *out = new pgr_scene{std::move(s)};
  });
}

pgr_status pgr_scene_plane(const double normal[3], double offset, pgr_scene** out) {
  return guarded([&] {
    require(out != nullptr, "null out pointer");
    Scene s = PlaneScene{to_vec(normal), offset};
    validate_scene(s);
    *out = new pgr_scene{std::move(s)};
  });
}

pgr_status pgr_trace_scene(const pgr_scene* s, const double dir[3], int* hit, double* t,
                           double normal[3]) {
  return guarded([&] {
    require(s && hit && t && normal, "null argument");
    TraceHit h = trace_scene(s->v, to_vec(dir));
    *hit = h.hit ? 1 : 0;
    if (h.hit) {
      *t = h.t;
      store_vec(normal, h.normal);
    }
  });
}

pgr_status pgr_render_scene_faces(const pgr_scene* s, int side, pgr_depth_cube** depth,
                                  pgr_normal_cube** normals) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(depth || normals, "null out pointer");
    auto [dc, nc] = render_scene_faces(s->v, side);
    if (depth) *depth = new pgr_depth_cube{std::move(dc)};
    if (normals) *normals = new pgr_normal_cube{std::move(nc)};
  });
}

pgr_status pgr_render_scene_erp(const pgr_scene* s, int width, pgr_depth** depth,
                                pgr_normals** normals) {
  return guarded([&] {
    require(s != nullptr, "null argument");
    require(depth || normals, "null out pointer");
    auto [d, n] = render_scene_erp(s->v, width);
    if (depth) *depth = new pgr_depth{std::move(d)};
    if (normals) *normals = new pgr_normals{std::move(n)};
  });
}

/* ---- alignment --------------------------------------------------------- */

pgr_status pgr_log_shift_beta_star(const pgr_depth* pred_log, const pgr_depth* gt_log,
                                   pgr_shift_result* out) {
  return guarded([&] {
    require(pred_log && gt_log && out, "null argument");
    ShiftAlignment a = log_shift_beta_star(pred_log->v, gt_log->v);
    *out = {a.beta, a.n_used};
  });
}

pgr_status pgr_pool_average(const pgr_depth* d, int factor, pgr_depth** values,
                            pgr_raster** fraction) {
  return guarded([&] {
    require(d != nullptr, "null argument");
    require(values || fraction, "null out pointer");
    AnchorGrid g = pool_average(d->v, factor);
    if (values) {
      auto v = new pgr_depth;
      v->v.kind = d->v.kind;
      v->v.frame = d->v.frame;
      v->v.data = std::move(g.values);
      v->v.valid = std::move(g.valid);
      *values = v;
    }
    if (fraction) *fraction = new pgr_raster{std::move(g.valid_fraction)};
  });
}

pgr_status pgr_median_metric_scale(const pgr_depth* coarse_log, const pgr_depth* si_log,
                                   int factor, pgr_shift_result* out) {
  return guarded([&] {
    require(coarse_log && si_log && out, "null argument");
    ShiftAlignment a = median_metric_scale(coarse_log->v, si_log->v, factor);
    *out = {a.beta, a.n_used};
  });
}

pgr_status pgr_apply_metric_scale(const pgr_depth* si, double beta, pgr_depth** out) {
  return guarded([&] {
    require(si && out, "null argument");
    *out = new pgr_depth{apply_metric_scale(si->v, beta)};
  });
}

pgr_status pgr_lstsq_scale_shift(const pgr_depth* pred, const pgr_depth* gt,
                                 pgr_affine_result* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    AffineAlignment a = lstsq_scale_shift(pred->v, gt->v);
    *out = {a.scale, a.shift, a.n_used, a.shift_only ? 1 : 0};
  });
}

pgr_status pgr_apply_affine(const pgr_depth* d, double scale, double shift, pgr_depth** out) {
  return guarded([&] {
    require(d && out, "null argument");
    *out = new pgr_depth{apply_affine(d->v, scale, shift)};
  });
}

/* ---- losses ------------------------------------------------------------ */

void pgr_loss_weights_default(pgr_loss_weights* w) {
  if (!w) return;
  LossWeights d;
  *w = {d.lambda_l1,  d.lambda_c,   d.lambda_grad,  d.lambda_norm, d.lambda_cos,
        d.lambda_perc, d.lambda_bce, d.lambda_focal, d.lambda_dice, d.focal_gamma};
}

pgr_status pgr_depth_composite_loss(const pgr_depth* pred_log, const pgr_depth* gt_log,
                                    const pgr_raster* conf, const pgr_normals* gt_normals,
                                    const pgr_loss_weights* w, pgr_loss_breakdown* out) {
  return guarded([&] {
    require(pred_log && gt_log && out, "null argument");
    LossWeights lw = to_weights(w);
    require(gt_normals != nullptr || lw.lambda_norm == 0.0,
            "gt_normals required when lambda_norm is nonzero");
    Rasterd ones;
    const Rasterd* c;
    if (conf) {
      c = &conf->v;
    } else {
      ones = Rasterd(pred_log->v.data.width, pred_log->v.data.height, 1.0);
      c = &ones;
    }
    static const NormalMap empty;
    DepthLossBreakdown b =
        depth_composite_loss(pred_log->v, gt_log->v, *c,
                             gt_normals ? gt_normals->v : empty, lw);
    *out = {b.total, b.l1, b.grad, b.norm};
  });
}

pgr_status pgr_cosine_loss(const pgr_normals* pred, const pgr_normals* gt, double* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    require(pred->v.frame == gt->v.frame, "normal frames differ");
    Mask joint(pred->v.valid.width, pred->v.valid.height, 0);
    require(pred->v.data.same_shape(gt->v.data), "shape mismatch");
    for (std::size_t i = 0; i < joint.size(); ++i)
      joint.v[i] = pred->v.valid.v[i] && gt->v.valid.v[i];
    *out = cosine_loss(pred->v.data, gt->v.data, joint);
  });
}

pgr_status pgr_bce_loss(const pgr_raster* prob, const pgr_raster* target, double* out) {
  return guarded([&] {
    require(prob && target && out, "null argument");
    *out = bce_loss(prob->v, target->v);
  });
}

pgr_status pgr_focal_loss(const pgr_raster* prob, const pgr_raster* target, double gamma,
                          double* out) {
  return guarded([&] {
    require(prob && target && out, "null argument");
    *out = focal_loss(prob->v, target->v, gamma);
  });
}

pgr_status pgr_dice_loss(const pgr_raster* prob, const pgr_raster* target, double* out) {
  return guarded([&] {
    require(prob && target && out, "null argument");
    *out = dice_loss(prob->v, target->v);
  });
}

/* ---- evaluation -------------------------------------------------------- */

pgr_status pgr_depth_metrics_eval(const pgr_depth* pred, const pgr_depth* gt, double lo,
                                  double hi, pgr_depth_metrics* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    DepthMetrics m = depth_metrics(pred->v, gt->v, lo, hi);
    *out = {m.abs_rel, m.rmse, m.delta1, m.n_used};
  });
}

pgr_status pgr_normal_metrics_eval(const pgr_normals* pred, const pgr_normals* gt,
                                   pgr_normal_metrics* out) {
  return guarded([&] {
    require(pred && gt && out, "null argument");
    NormalMetrics m = normal_metrics(pred->v, gt->v);
    *out = {m.mean_deg, m.mse_deg2, m.frac_below_5, m.frac_below_22_5, m.n_used};
  });
}

pgr_status pgr_seam_metrics_eval(const pgr_depth_cube* cm, double tau, double gamma,
                                 pgr_seam_metrics* out) {
  return guarded([&] {
    require(cm && out, "null argument");
    SeamMetrics m = seam_metrics(cm->v, tau, gamma);
    *out = {m.sdd, m.sp, m.ss, m.pairs, m.defects};
  });
}

/* ---- files ------------------------------------------------------------- */

pgr_status pgr_read_pfm(const char* path, pgr_raster** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new pgr_raster{read_pfm(path)};
  });
}

pgr_status pgr_write_pfm(const char* path, const pgr_raster* img) {
  return guarded([&] {
    require(path && img, "null argument");
    write_pfm(path, img->v);
  });
}

pgr_status pgr_read_depth_pfm(const char* path, int kind, int frame, pgr_depth** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new pgr_depth{read_depth_pfm(path, to_kind(kind), to_frame(frame))};
  });
}

pgr_status pgr_write_depth_pfm(const char* path, const pgr_depth* d) {
  return guarded([&] {
    require(path && d, "null argument");
    write_depth_pfm(path, d->v);
  });
}

pgr_status pgr_read_normals_pfm(const char* path, int frame, pgr_normals** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new pgr_normals{read_normals_pfm(path, to_nframe(frame))};
  });
}

pgr_status pgr_write_normals_pfm(const char* path, const pgr_normals* n) {
  return guarded([&] {
    require(path && n, "null argument");
    write_normals_pfm(path, n->v);
  });
}

pgr_status pgr_read_depth_png16(const char* path, double scale, int kind, int frame,
                                pgr_depth** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new pgr_depth{read_depth_png16(path, scale, to_kind(kind), to_frame(frame))};
  });
}

pgr_status pgr_write_depth_png16(const char* path, const pgr_depth* d, double scale) {
  return guarded([&] {
    require(path && d, "null argument");
    write_depth_png16(path, d->v, scale);
  });
}

pgr_status pgr_write_ply(const char* path, const pgr_cloud* pc, int format) {
  return guarded([&] {
    require(path && pc, "null argument");
    require(format == PGR_PLY_ASCII || format == PGR_PLY_BINARY_LE, "unknown ply format");
    write_ply(path, pc->v, format == PGR_PLY_ASCII ? PlyFormat::Ascii : PlyFormat::BinaryLE);
  });
}

pgr_status pgr_write_depth_stack(const char* dir, const pgr_depth_cube* cm, int format,
                                 double scale) {
  return guarded([&] {
    require(dir && cm, "null argument");
    require(format == PGR_STACK_PFM || format == PGR_STACK_PNG16, "unknown stack format");
    write_depth_stack(dir, cm->v, format == PGR_STACK_PFM ? StackFormat::Pfm : StackFormat::Png16,
                      scale);
  });
}

pgr_status pgr_read_depth_stack(const char* dir, pgr_depth_cube** out) {
  return guarded([&] {
    require(dir && out, "null argument");
    *out = new pgr_depth_cube{read_depth_stack(dir)};
  });
}

pgr_status pgr_write_normal_stack(const char* dir, const pgr_normal_cube* nc) {
  return guarded([&] {
    require(dir && nc, "null argument");
    write_normal_stack(dir, nc->v);
  });
}

pgr_status pgr_read_normal_stack(const char* dir, pgr_normal_cube** out) {
  return guarded([&] {
    require(dir && out, "null argument");
    *out = new pgr_normal_cube{read_normal_stack(dir)};
  });
}

} /* extern "C" */
