// panogeo command line tool. Everything goes through the public C API; this
// translation unit never touches library internals.
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "panogeo.h"

namespace {

struct Fail {
  int code;
  std::string msg;
};

int code_for(pgr_status st) {
  switch (st) {
    case PGR_OK:
      return 0;
    case PGR_ERR_IO:
    case PGR_ERR_FORMAT:
      return 2;
    default:
      return 1;
  }
}

void check(pgr_status st) {
  if (st != PGR_OK) throw Fail{code_for(st), pgr_last_error()};
}

[[noreturn]] void fail(const std::string& msg) { throw Fail{1, msg}; }

template <class T, void (*Free)(T*)>
struct Owner {
  T* p = nullptr;

  Owner() = default;
  Owner(const Owner&) = delete;
  Owner& operator=(const Owner&) = delete;
  Owner(Owner&& o) noexcept : p(std::exchange(o.p, nullptr)) {}
  Owner& operator=(Owner&& o) noexcept {
    if (this != &o) {
      if (p) Free(p);
      p = std::exchange(o.p, nullptr);
    }
    return *this;
  }
  ~Owner() {
    if (p) Free(p);
  }

  T** out() { return &p; }  // fill-once slot for pgr_* out parameters
  T* get() const { return p; }
  explicit operator bool() const { return p != nullptr; }
};

using Raster = Owner<pgr_raster, pgr_raster_free>;
using Depth = Owner<pgr_depth, pgr_depth_free>;
using Normals = Owner<pgr_normals, pgr_normals_free>;
using Cube = Owner<pgr_cubemap, pgr_cubemap_free>;
using DepthCube = Owner<pgr_depth_cube, pgr_depth_cube_free>;
using NormalCube = Owner<pgr_normal_cube, pgr_normal_cube_free>;
using Cloud = Owner<pgr_cloud, pgr_cloud_free>;
using SceneH = Owner<pgr_scene, pgr_scene_free>;

int kind_from(const std::string& s) {
  if (s == "planar_linear") return PGR_KIND_PLANAR_LINEAR;
  if (s == "planar_log") return PGR_KIND_PLANAR_LOG;
  if (s == "euclidean") return PGR_KIND_EUCLIDEAN;
  fail("unknown depth kind: " + s);
}

int frame_from(const std::string& s) {
  if (s == "erp") return PGR_FRAME_ERP;
  static const char* names[] = {"posx", "negx", "posy", "negy", "posz", "negz"};
  for (int i = 0; i < PGR_FACE_COUNT; ++i)
    if (s == names[i]) return i;
  fail("unknown frame: " + s);
}

int stack_format_from(const std::string& s) {
  if (s == "pfm") return PGR_STACK_PFM;
  if (s == "png16") return PGR_STACK_PNG16;
  fail("unknown stack format: " + s);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// .png files are 16-bit quantized with the given scale; everything else is PFM.
Depth read_depth_file(const std::string& path, int kind, int frame, double scale) {
  Depth d;
  if (ends_with(path, ".png"))
    check(pgr_read_depth_png16(path.c_str(), scale, kind, frame, d.out()));
  else
    check(pgr_read_depth_pfm(path.c_str(), kind, frame, d.out()));
  return d;
}

Depth with_kind(Depth d, int kind) {
  if (pgr_depth_kind(d.get()) == kind) return d;
  Depth c;
  check(pgr_convert_depth(d.get(), kind, c.out()));
  return c;
}

// Elementwise log copy tagged planar_log; nonpositive samples become invalid.
// Lets shift alignment run on any linear-kind map, including ERP euclidean
// depth where a representation change is not defined.
Depth log_copy(Depth& d) {
  if (pgr_depth_kind(d.get()) == PGR_KIND_PLANAR_LOG) {
    Depth c;
    check(pgr_depth_create(pgr_depth_width(d.get()), pgr_depth_height(d.get()),
                           PGR_KIND_PLANAR_LOG, pgr_depth_frame(d.get()), pgr_depth_data(d.get()),
                           pgr_depth_valid(d.get()), c.out()));
    return c;
  }
  int w = pgr_depth_width(d.get());
  int h = pgr_depth_height(d.get());
  const double* src = pgr_depth_data(d.get());
  const unsigned char* sv = pgr_depth_valid(d.get());
  std::vector<double> data(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<unsigned char> valid(data.size(), 0);
  for (std::size_t i = 0; i < data.size(); ++i)
    if (sv[i] && src[i] > 0.0) {
      data[i] = std::log(src[i]);
      valid[i] = 1;
    }
  Depth c;
  check(pgr_depth_create(w, h, PGR_KIND_PLANAR_LOG, pgr_depth_frame(d.get()), data.data(),
                         valid.data(), c.out()));
  return c;
}

/* ---- synth -------------------------------------------------------------- */

struct SynthOpts {
  std::string scene = "sphere";
  double radius = 1.0;
  std::vector<double> half{1.0, 1.0, 1.0};
  std::vector<double> camera{0.0, 0.0, 0.0};
  std::vector<double> normal{0.0, 0.0, 1.0};
  double offset = 1.0;
  int side = 0;
  int width = 0;
  std::string out;
  std::string normals_out;
  std::string format = "pfm";
  double scale = 0.001;
};

int cmd_synth(const SynthOpts& o) {
  SceneH s;
  if (o.scene == "sphere")
    check(pgr_scene_sphere(o.radius, s.out()));
  else if (o.scene == "box")
    check(pgr_scene_box(o.half.data(), o.camera.data(), s.out()));
  else if (o.scene == "plane")
    check(pgr_scene_plane(o.normal.data(), o.offset, s.out()));
  else
    fail("unknown scene: " + o.scene);

  if ((o.side > 0) == (o.width > 0)) fail("exactly one of --side and --width is required");

  if (o.side > 0) {
    DepthCube dc;
    NormalCube nc;
    check(pgr_render_scene_faces(s.get(), o.side, dc.out(),
                                 o.normals_out.empty() ? nullptr : nc.out()));
    check(pgr_write_depth_stack(o.out.c_str(), dc.get(), stack_format_from(o.format), o.scale));
    if (!o.normals_out.empty()) check(pgr_write_normal_stack(o.normals_out.c_str(), nc.get()));
  } else {
    Depth d;
    Normals n;
    check(pgr_render_scene_erp(s.get(), o.width, d.out(),
                               o.normals_out.empty() ? nullptr : n.out()));
    check(pgr_write_depth_pfm(o.out.c_str(), d.get()));
    if (!o.normals_out.empty()) check(pgr_write_normals_pfm(o.normals_out.c_str(), n.get()));
  }
  return 0;
}

/* ---- erp2cube / cube2erp ------------------------------------------------ */

struct Erp2CubeOpts {
  std::string in, out;
  int side = 256;
  std::string kind = "euclidean";
  std::string format = "pfm";
  double scale = 0.001;
};

int cmd_erp2cube(const Erp2CubeOpts& o) {
  Raster erp;
  check(pgr_read_pfm(o.in.c_str(), erp.out()));
  Cube cm;
  check(pgr_erp_to_cubemap(erp.get(), o.side, cm.out()));
  DepthCube dc;
  check(pgr_depth_cube_from_cubemap(cm.get(), kind_from(o.kind), dc.out()));
  check(pgr_write_depth_stack(o.out.c_str(), dc.get(), stack_format_from(o.format), o.scale));
  return 0;
}

struct Cube2ErpOpts {
  std::string stack, out;
  int width = 512;
};

int cmd_cube2erp(const Cube2ErpOpts& o) {
  DepthCube dc;
  check(pgr_read_depth_stack(o.stack.c_str(), dc.out()));
  Cube cm;
  check(pgr_cubemap_from_depth_cube(dc.get(), cm.out()));
  Raster erp;
  check(pgr_cubemap_to_erp(cm.get(), o.width, erp.out()));
  check(pgr_write_pfm(o.out.c_str(), erp.get()));
  return 0;
}

/* ---- normals / pcl ------------------------------------------------------- */

struct NormalsOpts {
  std::string in, stack, out;
  std::string kind = "planar_linear";
  std::string frame = "posz";
  double scale = 0.001;
};

int cmd_normals(const NormalsOpts& o) {
  if (o.in.empty() == o.stack.empty()) fail("exactly one of --in and --stack is required");
  if (!o.in.empty()) {
    Depth d = with_kind(read_depth_file(o.in, kind_from(o.kind), frame_from(o.frame), o.scale),
                        PGR_KIND_PLANAR_LINEAR);
    Normals n;
    check(pgr_depth_to_normals(d.get(), n.out()));
    check(pgr_write_normals_pfm(o.out.c_str(), n.get()));
    return 0;
  }
  DepthCube dc;
  check(pgr_read_depth_stack(o.stack.c_str(), dc.out()));
  NormalCube nc;
  check(pgr_normal_cube_create(pgr_depth_cube_side(dc.get()), PGR_NORMAL_FRAME_WORLD, nc.out()));
  for (int f = 0; f < PGR_FACE_COUNT; ++f) {
    Depth face;
    check(pgr_depth_cube_get_face(dc.get(), f, face.out()));
    Depth lin = with_kind(std::move(face), PGR_KIND_PLANAR_LINEAR);
    Normals n;
    check(pgr_depth_to_normals(lin.get(), n.out()));
    check(pgr_normal_cube_set_face(nc.get(), f, n.get()));
  }
  check(pgr_write_normal_stack(o.out.c_str(), nc.get()));
  return 0;
}

struct PclOpts {
  std::string in, stack, out;
  std::string kind = "planar_linear";
  std::string frame = "posz";
  std::string format = "binary";
  double scale = 0.001;
};

int cmd_pcl(const PclOpts& o) {
  if (o.in.empty() == o.stack.empty()) fail("exactly one of --in and --stack is required");
  int fmt;
  if (o.format == "ascii")
    fmt = PGR_PLY_ASCII;
  else if (o.format == "binary")
    fmt = PGR_PLY_BINARY_LE;
  else
    fail("unknown ply format: " + o.format);

  Cloud merged;
  if (!o.in.empty()) {
    Depth d = with_kind(read_depth_file(o.in, kind_from(o.kind), frame_from(o.frame), o.scale),
                        PGR_KIND_PLANAR_LINEAR);
    check(pgr_depth_to_points(d.get(), merged.out()));
  } else {
    DepthCube dc;
    check(pgr_read_depth_stack(o.stack.c_str(), dc.out()));
    for (int f = 0; f < PGR_FACE_COUNT; ++f) {
      Depth face;
      check(pgr_depth_cube_get_face(dc.get(), f, face.out()));
      Depth lin = with_kind(std::move(face), PGR_KIND_PLANAR_LINEAR);
      Cloud part;
      check(pgr_depth_to_points(lin.get(), part.out()));
      if (!merged)
        merged = std::move(part);
      else
        check(pgr_cloud_merge(merged.get(), part.get()));
    }
  }
  check(pgr_write_ply(o.out.c_str(), merged.get(), fmt));
  return 0;
}

/* ---- align --------------------------------------------------------------- */

struct AlignOpts {
  std::string mode = "shift";
  std::string pred, gt, coarse, si, out;
  std::string kind;  // empty = per-mode default
  std::string frame = "erp";
  int factor = pgr_default_anchor_factor();
  double scale = 0.001;
};

int cmd_align(const AlignOpts& o) {
  int frame = frame_from(o.frame);
  if (o.mode == "shift") {
    if (o.pred.empty() || o.gt.empty()) fail("--pred and --gt are required for --mode shift");
    int kind = kind_from(o.kind.empty() ? "planar_log" : o.kind);
    Depth pred = read_depth_file(o.pred, kind, frame, o.scale);
    Depth gt = read_depth_file(o.gt, kind, frame, o.scale);
    Depth pl = log_copy(pred), gl = log_copy(gt);
    pgr_shift_result r;
    check(pgr_log_shift_beta_star(pl.get(), gl.get(), &r));
    std::printf("beta=%.6f\nn=%ld\n", r.beta, r.n_used);
    if (!o.out.empty()) {
      Depth aligned;
      check(pgr_apply_metric_scale(pred.get(), r.beta, aligned.out()));
      check(pgr_write_depth_pfm(o.out.c_str(), aligned.get()));
    }
    return 0;
  }
  if (o.mode == "metric") {
    if (o.coarse.empty() || o.si.empty()) fail("--coarse and --si are required for --mode metric");
    int kind = kind_from(o.kind.empty() ? "planar_log" : o.kind);
    Depth coarse_raw = read_depth_file(o.coarse, kind, frame, o.scale);
    Depth si_raw = read_depth_file(o.si, kind, frame, o.scale);
    Depth coarse = log_copy(coarse_raw);
    Depth si = log_copy(si_raw);
    pgr_shift_result r;
    check(pgr_median_metric_scale(coarse.get(), si.get(), o.factor, &r));
    std::printf("beta=%.6f\nn=%ld\n", r.beta, r.n_used);
    if (!o.out.empty()) {
      Depth aligned;
      check(pgr_apply_metric_scale(si_raw.get(), r.beta, aligned.out()));
      check(pgr_write_depth_pfm(o.out.c_str(), aligned.get()));
    }
    return 0;
  }
  if (o.mode == "lstsq") {
    if (o.pred.empty() || o.gt.empty()) fail("--pred and --gt are required for --mode lstsq");
    int kind = kind_from(o.kind.empty() ? "planar_linear" : o.kind);
    Depth pred = read_depth_file(o.pred, kind, frame, o.scale);
    Depth gt = read_depth_file(o.gt, kind, frame, o.scale);
    pgr_affine_result r;
    check(pgr_lstsq_scale_shift(pred.get(), gt.get(), &r));
    std::printf("scale=%.6f\nshift=%.6f\nn=%ld\nshift_only=%d\n", r.scale, r.shift, r.n_used,
                r.shift_only);
    if (!o.out.empty()) {
      Depth aligned;
      check(pgr_apply_affine(pred.get(), r.scale, r.shift, aligned.out()));
      check(pgr_write_depth_pfm(o.out.c_str(), aligned.get()));
    }
    return 0;
  }
  fail("unknown mode: " + o.mode);
}

/* ---- eval ----------------------------------------------------------------- */

struct EvalOpts {
  std::string pred, gt;
  std::string kind = "euclidean";
  std::string frame = "erp";
  std::string align = "none";
  std::vector<double> range{pgr_default_range_lo(), pgr_default_range_hi()};
  std::string report = "table";
  double scale = 0.001;
};

int cmd_eval(const EvalOpts& o) {
  int kind = kind_from(o.kind);
  if (kind == PGR_KIND_PLANAR_LOG) fail("eval expects a linear depth kind");
  int frame = frame_from(o.frame);
  Depth pred = read_depth_file(o.pred, kind, frame, o.scale);
  Depth gt = read_depth_file(o.gt, kind, frame, o.scale);

  if (o.align == "shift") {
    Depth pl = log_copy(pred), gl = log_copy(gt);
    pgr_shift_result r;
    check(pgr_log_shift_beta_star(pl.get(), gl.get(), &r));
    Depth aligned;
    check(pgr_apply_metric_scale(pred.get(), r.beta, aligned.out()));
    pred = std::move(aligned);
  } else if (o.align == "lstsq") {
    pgr_affine_result r;
    check(pgr_lstsq_scale_shift(pred.get(), gt.get(), &r));
    Depth aligned;
    check(pgr_apply_affine(pred.get(), r.scale, r.shift, aligned.out()));
    pred = std::move(aligned);
  } else if (o.align != "none") {
    fail("unknown align mode: " + o.align);
  }

  pgr_depth_metrics m;
  check(pgr_depth_metrics_eval(pred.get(), gt.get(), o.range[0], o.range[1], &m));
  if (o.report == "kv")
    std::printf("abs_rel=%.6f\nrmse=%.6f\ndelta1=%.6f\nn=%ld\n", m.abs_rel, m.rmse, m.delta1,
                m.n_used);
  else
    std::printf("abs_rel=%.2f rmse=%.2f delta1=%.2f n=%ld\n", m.abs_rel * 100.0, m.rmse,
                m.delta1 * 100.0, m.n_used);
  return 0;
}

/* ---- seams ----------------------------------------------------------------- */

struct SeamsOpts {
  std::string stack;
  double tau = pgr_default_seam_tau();
  double gamma = pgr_default_seam_gamma();
  std::string report = "kv";
};

int cmd_seams(const SeamsOpts& o) {
  DepthCube dc;
  check(pgr_read_depth_stack(o.stack.c_str(), dc.out()));
  pgr_seam_metrics m;
  check(pgr_seam_metrics_eval(dc.get(), o.tau, o.gamma, &m));
  if (o.report == "kv")
    std::printf("sdd=%.6f\nsp=%.6f\nss=%.6f\npairs=%ld\ndefects=%ld\n", m.sdd, m.sp, m.ss,
                m.pairs, m.defects);
  else
    std::printf("sdd=%.2f sp=%.2f ss=%.2f pairs=%ld defects=%ld\n", m.sdd * 100.0, m.sp * 100.0,
                m.ss * 100.0, m.pairs, m.defects);
  return 0;
}

/* ---- losses ----------------------------------------------------------------- */

struct LossOpts {
  std::string pred, gt, conf, gt_normals;
  std::string kind = "planar_log";
  std::string frame = "erp";
  std::string normals_frame = "world";
  double scale = 0.001;
  pgr_loss_weights w{};
  bool norm_set = false;  // --lambda_norm given explicitly
};

int cmd_losses(const LossOpts& o) {
  int frame = frame_from(o.frame);
  Depth pred = with_kind(read_depth_file(o.pred, kind_from(o.kind), frame, o.scale),
                         PGR_KIND_PLANAR_LOG);
  Depth gt = with_kind(read_depth_file(o.gt, kind_from(o.kind), frame, o.scale),
                       PGR_KIND_PLANAR_LOG);
  Raster conf;
  if (!o.conf.empty()) check(pgr_read_pfm(o.conf.c_str(), conf.out()));
  Normals gtn;
  if (!o.gt_normals.empty()) {
    int nf = o.normals_frame == "face_local" ? PGR_NORMAL_FRAME_FACE_LOCAL
                                             : PGR_NORMAL_FRAME_WORLD;
    check(pgr_read_normals_pfm(o.gt_normals.c_str(), nf, gtn.out()));
  }

  pgr_loss_weights w = o.w;
  if (!gtn) {
    if (o.norm_set && w.lambda_norm != 0.0)
      fail("--gt-normals is required when lambda_norm is nonzero");
    w.lambda_norm = 0.0;  // the normal term needs ground-truth normals
  }

  pgr_loss_breakdown b;
  check(pgr_depth_composite_loss(pred.get(), gt.get(), conf ? conf.get() : nullptr,
                                 gtn ? gtn.get() : nullptr, &w, &b));
  std::printf("total=%.9g\nl1=%.9g\ngrad=%.9g\nnorm=%.9g\n", b.total, b.l1, b.grad, b.norm);
  std::printf("lambda_l1=%.9g\nlambda_c=%.9g\nlambda_grad=%.9g\nlambda_norm=%.9g\n", w.lambda_l1,
              w.lambda_c, w.lambda_grad, w.lambda_norm);
  std::printf("lambda_cos=%.9g\nlambda_perc=%.9g\nlambda_bce=%.9g\nlambda_focal=%.9g\n",
              w.lambda_cos, w.lambda_perc, w.lambda_bce, w.lambda_focal);
  std::printf("lambda_dice=%.9g\nfocal_gamma=%.9g\n", w.lambda_dice, w.focal_gamma);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"panoramic depth geometry toolkit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pgr_version()));
  app.set_config("--config", "", "read options from a key=value file; flags override it");

  int threads = 0;
  app.add_option("--threads", threads, "worker cap for parallel stages (0 = automatic)")
      ->envname("PANOGEO_THREADS");

  int rc = 0;
  const std::vector<std::string> kinds{"planar_linear", "planar_log", "euclidean"};
  const std::vector<std::string> frames{"erp",  "posx", "negx", "posy",
                                        "negy", "posz", "negz"};
  auto apply_threads = [&] {
    if (threads > 0) pgr_set_threads(threads);
  };

  {
    auto o = std::make_shared<SynthOpts>();
    auto* sub = app.add_subcommand("synth", "render an analytic scene to depth/normal rasters");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--scene", o->scene, "sphere, box or plane")
        ->check(CLI::IsMember({"sphere", "box", "plane"}));
    sub->add_option("--radius", o->radius, "sphere radius (m)");
    sub->add_option("--half", o->half, "box half extents")->expected(3);
    sub->add_option("--camera", o->camera, "box camera position")->expected(3);
    sub->add_option("--normal", o->normal, "plane unit normal")->expected(3);
    sub->add_option("--offset", o->offset, "plane offset (m)");
    sub->add_option("--side", o->side, "face resolution; writes a cubemap stack");
    sub->add_option("--width", o->width, "ERP width; writes a single map");
    sub->add_option("--out", o->out, "output stack directory or PFM file")->required();
    sub->add_option("--normals-out", o->normals_out, "also write normals here");
    sub->add_option("--format", o->format, "stack image format")
        ->check(CLI::IsMember({"pfm", "png16"}));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_synth(*o);
    });
  }
  {
    auto o = std::make_shared<Erp2CubeOpts>();
    auto* sub = app.add_subcommand("erp2cube", "resample an ERP raster onto six cube faces");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--in", o->in, "input PFM")->required();
    sub->add_option("--side", o->side, "face resolution");
    sub->add_option("--out", o->out, "output stack directory")->required();
    sub->add_option("--kind", o->kind, "depth kind recorded in the stack")
        ->check(CLI::IsMember(kinds));
    sub->add_option("--format", o->format, "stack image format")
        ->check(CLI::IsMember({"pfm", "png16"}));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_erp2cube(*o);
    });
  }
  {
    auto o = std::make_shared<Cube2ErpOpts>();
    auto* sub = app.add_subcommand("cube2erp", "resample a cubemap stack back to an ERP raster");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--stack", o->stack, "input stack directory")->required();
    sub->add_option("--width", o->width, "ERP width (height = width / 2)");
    sub->add_option("--out", o->out, "output PFM")->required();
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_cube2erp(*o);
    });
  }
  {
    auto o = std::make_shared<NormalsOpts>();
    auto* sub = app.add_subcommand("normals", "surface normals from depth");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--in", o->in, "input depth file (single face)");
    sub->add_option("--stack", o->stack, "input stack directory (all faces)");
    sub->add_option("--out", o->out, "output PFM file or stack directory")->required();
    sub->add_option("--kind", o->kind, "input depth kind")->check(CLI::IsMember(kinds));
    sub->add_option("--frame", o->frame, "face frame of --in")->check(CLI::IsMember(frames));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_normals(*o);
    });
  }
  {
    auto o = std::make_shared<PclOpts>();
    auto* sub = app.add_subcommand("pcl", "lift depth to a PLY point cloud");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--in", o->in, "input depth file (single face)");
    sub->add_option("--stack", o->stack, "input stack directory (all faces)");
    sub->add_option("--out", o->out, "output PLY")->required();
    sub->add_option("--kind", o->kind, "input depth kind")->check(CLI::IsMember(kinds));
    sub->add_option("--frame", o->frame, "face frame of --in")->check(CLI::IsMember(frames));
    sub->add_option("--format", o->format, "PLY encoding")
        ->check(CLI::IsMember({"ascii", "binary"}));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_pcl(*o);
    });
  }
  {
    auto o = std::make_shared<AlignOpts>();
    auto* sub = app.add_subcommand("align", "fit a shift, metric or affine depth alignment");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--mode", o->mode, "shift, metric or lstsq")
        ->check(CLI::IsMember({"shift", "metric", "lstsq"}));
    sub->add_option("--pred", o->pred, "prediction (shift/lstsq)");
    sub->add_option("--gt", o->gt, "ground truth (shift/lstsq)");
    sub->add_option("--coarse", o->coarse, "coarse metric map (metric)");
    sub->add_option("--si", o->si, "scale-invariant map (metric)");
    sub->add_option("--F", o->factor, "anchor pooling factor (metric)");
    sub->add_option("--kind", o->kind, "input depth kind (default depends on mode)")
        ->check(CLI::IsMember(kinds));
    sub->add_option("--frame", o->frame, "map frame")->check(CLI::IsMember(frames));
    sub->add_option("--out", o->out, "write the aligned map here");
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_align(*o);
    });
  }
  {
    auto o = std::make_shared<EvalOpts>();
    auto* sub = app.add_subcommand("eval", "depth metrics between prediction and ground truth");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--pred", o->pred, "prediction depth file")->required();
    sub->add_option("--gt", o->gt, "ground truth depth file")->required();
    sub->add_option("--kind", o->kind, "depth kind of both inputs")->check(CLI::IsMember(kinds));
    sub->add_option("--frame", o->frame, "map frame")->check(CLI::IsMember(frames));
    sub->add_option("--align", o->align, "pre-alignment: none, shift or lstsq")
        ->check(CLI::IsMember({"none", "shift", "lstsq"}));
    sub->add_option("--range", o->range, "ground-truth range mask [lo hi] (m)")->expected(2);
    sub->add_option("--report", o->report, "kv (fractions) or table (x100)")
        ->check(CLI::IsMember({"kv", "table"}));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_eval(*o);
    });
  }
  {
    auto o = std::make_shared<SeamsOpts>();
    auto* sub = app.add_subcommand("seams", "cross-face seam discrepancy metrics");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--stack", o->stack, "input stack directory")->required();
    sub->add_option("--tau", o->tau, "defect threshold (log-depth units)");
    sub->add_option("--gamma", o->gamma, "severe-edge threshold (log-depth units)");
    sub->add_option("--report", o->report, "kv (fractions) or table (x100)")
        ->check(CLI::IsMember({"kv", "table"}));
    sub->callback([=, &rc] {
      apply_threads();
      rc = cmd_seams(*o);
    });
  }
  {
    auto o = std::make_shared<LossOpts>();
    pgr_loss_weights_default(&o->w);
    auto* sub = app.add_subcommand("losses", "composite depth loss breakdown");
    sub->set_config("--config", "", "read options from a key=value file");
    sub->add_option("--pred", o->pred, "prediction depth file")->required();
    sub->add_option("--gt", o->gt, "ground truth depth file")->required();
    sub->add_option("--conf", o->conf, "confidence PFM (default: unit confidence)");
    sub->add_option("--gt-normals", o->gt_normals, "ground-truth normals PFM");
    sub->add_option("--kind", o->kind, "input depth kind")->check(CLI::IsMember(kinds));
    sub->add_option("--frame", o->frame, "map frame")->check(CLI::IsMember(frames));
    sub->add_option("--normals-frame", o->normals_frame, "frame of --gt-normals")
        ->check(CLI::IsMember({"world", "face_local"}));
    sub->add_option("--scale", o->scale, "png16 meters per raw unit");
    sub->add_option("--lambda_l1", o->w.lambda_l1, "L1 term weight");
    sub->add_option("--lambda_c", o->w.lambda_c, "confidence regularizer weight");
    sub->add_option("--lambda_grad", o->w.lambda_grad, "gradient term weight");
    auto* norm_opt = sub->add_option("--lambda_norm", o->w.lambda_norm, "normal term weight");
    sub->add_option("--lambda_cos", o->w.lambda_cos, "cosine loss weight");
    sub->add_option("--lambda_perc", o->w.lambda_perc, "perceptual weight (carried in configs)");
    sub->add_option("--lambda_bce", o->w.lambda_bce, "BCE weight");
    sub->add_option("--lambda_focal", o->w.lambda_focal, "focal weight");
    sub->add_option("--lambda_dice", o->w.lambda_dice, "dice weight");
    sub->add_option("--focal_gamma", o->w.focal_gamma, "focal exponent");
    sub->callback([=, &rc] {
      apply_threads();
      o->norm_set = norm_opt->count() > 0;
      rc = cmd_losses(*o);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::fprintf(stderr, "panogeo: %s\n", e.what());
    std::fprintf(stderr, "run 'panogeo --help' for usage\n");
    return 1;
  } catch (const Fail& f) {
    std::fprintf(stderr, "panogeo: %s\n", f.msg.c_str());
    return f.code;
  }
  return rc;
}
