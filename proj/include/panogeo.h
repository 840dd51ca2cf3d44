/* panogeo: panoramic depth geometry, alignment, losses and evaluation.
 *
 * Conventions shared by every entry point:
 *   - Right-handed frame, X right, Y up, Z forward. Longitude theta in
 *     [-pi, pi] runs from +Z toward +X, latitude phi in [-pi/2, pi/2]
 *     toward +Y.
 *   - Equirectangular charts use u = theta / 2pi + 0.5, v = phi / pi + 0.5;
 *     row 0 of a raster is the top (v = 1, north pole), pixel centers sit at
 *     (i + 0.5) / extent. u wraps, v clamps at the poles.
 *   - Cube faces are 90-degree gnomonic charts in the fixed order
 *     posx negx posy negy posz negz, side x side pixels each.
 *   - Functions return PGR_OK or an error code; pgr_last_error() describes
 *     the most recent failure in the calling thread. Out-parameters are
 *     written only on success.
 *   - Objects returned through pgr_*'** out' parameters are owned by the
 *     caller and released with the matching pgr_*_free.
 */
#ifndef PANOGEO_H
#define PANOGEO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pgr_status {
  PGR_OK = 0,
  PGR_ERR_DOMAIN = 1,  /* invalid arguments or degenerate data */
  PGR_ERR_IO = 2,      /* filesystem failure */
  PGR_ERR_FORMAT = 3,  /* malformed file contents */
  PGR_ERR_INTERNAL = 4
} pgr_status;

const char* pgr_last_error(void);
const char* pgr_version(void);

/* Worker count for resampling/rendering loops; 0 restores the default
 * (PANOGEO_THREADS environment variable, else hardware concurrency).
 * Results are identical for every worker count. */
void pgr_set_threads(int n);
int pgr_threads(void);

enum {
  PGR_FACE_POSX = 0,
  PGR_FACE_NEGX = 1,
  PGR_FACE_POSY = 2,
  PGR_FACE_NEGY = 3,
  PGR_FACE_POSZ = 4,
  PGR_FACE_NEGZ = 5,
  PGR_FACE_COUNT = 6
};

enum {
  PGR_KIND_PLANAR_LINEAR = 0, /* z-depth along the face axis */
  PGR_KIND_PLANAR_LOG = 1,    /* log of planar_linear */
  PGR_KIND_EUCLIDEAN = 2      /* ray length */
};

/* Frame of a depth map: one of the PGR_FACE_* values, or PGR_FRAME_ERP. */
#define PGR_FRAME_ERP (-1)

enum { PGR_EDGE_TOP = 0, PGR_EDGE_BOTTOM = 1, PGR_EDGE_LEFT = 2, PGR_EDGE_RIGHT = 3 };
enum { PGR_PAD_CROSS_FACE = 0, PGR_PAD_ZERO = 1 };
enum { PGR_NORMAL_FRAME_WORLD = 0, PGR_NORMAL_FRAME_FACE_LOCAL = 1 };
enum { PGR_PLY_ASCII = 0, PGR_PLY_BINARY_LE = 1 };
enum { PGR_STACK_PFM = 0, PGR_STACK_PNG16 = 1 };

/* Evaluation defaults: seam thresholds, depth range, pooling factor, sky
 * threshold. */
double pgr_default_seam_tau(void);
double pgr_default_seam_gamma(void);
double pgr_default_range_lo(void);
double pgr_default_range_hi(void);
int pgr_default_anchor_factor(void);
double pgr_default_sky_threshold(void);

/* ---- handles ---------------------------------------------------------- */

typedef struct pgr_raster pgr_raster;           /* scalar grid */
typedef struct pgr_depth pgr_depth;             /* depth + validity + kind + frame */
typedef struct pgr_normals pgr_normals;         /* per-pixel 3-vectors + validity */
typedef struct pgr_cubemap pgr_cubemap;         /* six scalar faces */
typedef struct pgr_depth_cube pgr_depth_cube;   /* six depth faces */
typedef struct pgr_normal_cube pgr_normal_cube; /* six normal faces */
typedef struct pgr_cloud pgr_cloud;             /* point list */
typedef struct pgr_scene pgr_scene;             /* analytic test scene */

void pgr_raster_free(pgr_raster*);
void pgr_depth_free(pgr_depth*);
void pgr_normals_free(pgr_normals*);
void pgr_cubemap_free(pgr_cubemap*);
void pgr_depth_cube_free(pgr_depth_cube*);
void pgr_normal_cube_free(pgr_normal_cube*);
void pgr_cloud_free(pgr_cloud*);
void pgr_scene_free(pgr_scene*);

/* ---- rasters ----------------------------------------------------------- */

/* data may be NULL (zeros). Row-major, row 0 on top. */
pgr_status pgr_raster_create(int width, int height, const double* data, pgr_raster** out);
int pgr_raster_width(const pgr_raster*);
int pgr_raster_height(const pgr_raster*);
double* pgr_raster_data(pgr_raster*);
const double* pgr_raster_data_const(const pgr_raster*);

/* ---- depth maps -------------------------------------------------------- */

/* data NULL means zeros; valid NULL means all valid (nonzero = valid). */
pgr_status pgr_depth_create(int width, int height, int kind, int frame, const double* data,
                            const unsigned char* valid, pgr_depth** out);
int pgr_depth_width(const pgr_depth*);
int pgr_depth_height(const pgr_depth*);
int pgr_depth_kind(const pgr_depth*);
int pgr_depth_frame(const pgr_depth*); /* face id or PGR_FRAME_ERP */
double* pgr_depth_data(pgr_depth*);
unsigned char* pgr_depth_valid(pgr_depth*);

/* ---- normal maps ------------------------------------------------------- */

/* xyz is interleaved, 3 doubles per pixel; NULL means zeros. */
pgr_status pgr_normals_create(int width, int height, int frame, const double* xyz,
                              const unsigned char* valid, pgr_normals** out);
int pgr_normals_width(const pgr_normals*);
int pgr_normals_height(const pgr_normals*);
int pgr_normals_frame(const pgr_normals*);
double* pgr_normals_data(pgr_normals*);
unsigned char* pgr_normals_valid(pgr_normals*);

/* ---- spherical chart --------------------------------------------------- */

pgr_status pgr_erp_uv_from_angles(double theta, double phi, double* u, double* v);
pgr_status pgr_angles_from_erp_uv(double u, double v, double* theta, double* phi);
pgr_status pgr_direction_from_angles(double theta, double phi, double dir[3]);
pgr_status pgr_angles_from_direction(const double dir[3], double* theta, double* phi);
pgr_status pgr_bilinear_sample_erp(const pgr_raster* img, double u, double v, double* out);

/* ---- cubemap ----------------------------------------------------------- */

pgr_status pgr_cubemap_create(int side, pgr_cubemap** out);
int pgr_cubemap_side(const pgr_cubemap*);
pgr_status pgr_cubemap_set_face(pgr_cubemap*, int face, const pgr_raster* img);
pgr_status pgr_cubemap_get_face(const pgr_cubemap*, int face, pgr_raster** out);

pgr_status pgr_face_dir_from_uv(int face, double uc, double vc, double dir[3]);
pgr_status pgr_uv_face_from_dir(const double dir[3], int* face, double* uc, double* vc);

pgr_status pgr_erp_to_cubemap(const pgr_raster* erp, int side, pgr_cubemap** out);
pgr_status pgr_cubemap_to_erp(const pgr_cubemap* cm, int width, pgr_raster** out);

/* Geometrically derived edge table; reversed is 0 or 1. */
pgr_status pgr_cube_adjacency(int face, int edge, int* nbr_face, int* nbr_edge, int* reversed);

/* One padded face of size (side + 2 pad)^2; mode is PGR_PAD_*. */
pgr_status pgr_cross_face_pad(const pgr_cubemap* cm, int pad, int mode, int face,
                              pgr_raster** out);

/* ---- depth/normal cubes ------------------------------------------------ */

/* Faces start all-invalid. */
pgr_status pgr_depth_cube_create(int side, int kind, pgr_depth_cube** out);
int pgr_depth_cube_side(const pgr_depth_cube*);
int pgr_depth_cube_kind(const pgr_depth_cube*);
/* set copies; the face frame must match the slot. */
pgr_status pgr_depth_cube_set_face(pgr_depth_cube*, int face, const pgr_depth* d);
pgr_status pgr_depth_cube_get_face(const pgr_depth_cube*, int face, pgr_depth** out);

pgr_status pgr_normal_cube_create(int side, int frame, pgr_normal_cube** out);
int pgr_normal_cube_side(const pgr_normal_cube*);
pgr_status pgr_normal_cube_set_face(pgr_normal_cube*, int face, const pgr_normals* n);
pgr_status pgr_normal_cube_get_face(const pgr_normal_cube*, int face, pgr_normals** out);

/* Value-level bridges: non-finite samples become invalid pixels and back. */
pgr_status pgr_depth_cube_from_cubemap(const pgr_cubemap* cm, int kind, pgr_depth_cube** out);
pgr_status pgr_cubemap_from_depth_cube(const pgr_depth_cube* dc, pgr_cubemap** out);

/* ---- geometry ---------------------------------------------------------- */

pgr_status pgr_convert_depth(const pgr_depth* d, int to_kind, pgr_depth** out);
pgr_status pgr_depth_to_points(const pgr_depth* d, pgr_cloud** out);
pgr_status pgr_depth_to_normals(const pgr_depth* d, pgr_normals** out);
/* Marks pixels with prob > threshold invalid in place; normals may be NULL. */
pgr_status pgr_apply_sky_mask(pgr_depth* d, pgr_normals* n, const pgr_raster* prob,
                              double threshold);
pgr_status pgr_faces_to_erp_depth(const pgr_depth_cube* cm, int width, pgr_depth** out);

/* ---- point clouds ------------------------------------------------------ */

long pgr_cloud_size(const pgr_cloud*);
const double* pgr_cloud_points(const pgr_cloud*); /* 3 doubles per point */
pgr_status pgr_cloud_merge(pgr_cloud* dst, const pgr_cloud* src);
/* rgb is 3 bytes per point, or NULL to drop colors. */
pgr_status pgr_cloud_set_colors(pgr_cloud*, const unsigned char* rgb);

/* ---- analytic scenes --------------------------------------------------- */

pgr_status pgr_scene_sphere(double radius, pgr_scene** out);
pgr_status pgr_scene_box(const double half_extents[3], const double camera[3], pgr_scene** out);
pgr_status pgr_scene_plane(const double normal[3], double offset, pgr_scene** out);
/* hit is 0/1; t and normal are written only when hit. */
pgr_status pgr_trace_scene(const pgr_scene*, const double dir[3], int* hit, double* t,
                           double normal[3]);
pgr_status pgr_render_scene_faces(const pgr_scene*, int side, pgr_depth_cube** depth,
                                  pgr_normal_cube** normals);
pgr_status pgr_render_scene_erp(const pgr_scene*, int width, pgr_depth** depth,
                                pgr_normals** normals);

/* ---- alignment --------------------------------------------------------- */

typedef struct pgr_shift_result {
  double beta;
  long n_used;
} pgr_shift_result;

typedef struct pgr_affine_result {
  double scale;
  double shift;
  long n_used;
  int shift_only;
} pgr_affine_result;

pgr_status pgr_log_shift_beta_star(const pgr_depth* pred_log, const pgr_depth* gt_log,
                                   pgr_shift_result* out);
/* values: pooled cell averages (same kind/frame); fraction: valid share per
 * cell. Either out-pointer may be NULL. */
pgr_status pgr_pool_average(const pgr_depth* d, int factor, pgr_depth** values,
                            pgr_raster** fraction);
pgr_status pgr_median_metric_scale(const pgr_depth* coarse_log, const pgr_depth* si_log,
                                   int factor, pgr_shift_result* out);
pgr_status pgr_apply_metric_scale(const pgr_depth* si, double beta, pgr_depth** out);
pgr_status pgr_lstsq_scale_shift(const pgr_depth* pred, const pgr_depth* gt,
                                 pgr_affine_result* out);
pgr_status pgr_apply_affine(const pgr_depth* d, double scale, double shift, pgr_depth** out);

/* ---- losses ------------------------------------------------------------ */

typedef struct pgr_loss_weights {
  double lambda_l1;
  double lambda_c;
  double lambda_grad;
  double lambda_norm;
  double lambda_cos;
  double lambda_perc;
  double lambda_bce;
  double lambda_focal;
  double lambda_dice;
  double focal_gamma;
} pgr_loss_weights;

void pgr_loss_weights_default(pgr_loss_weights*);

typedef struct pgr_loss_breakdown {
  double total, l1, grad, norm;
} pgr_loss_breakdown;

/* conf NULL means unit confidence. gt_normals may be NULL only when
 * lambda_norm is 0. weights NULL means defaults. */
pgr_status pgr_depth_composite_loss(const pgr_depth* pred_log, const pgr_depth* gt_log,
                                    const pgr_raster* conf, const pgr_normals* gt_normals,
                                    const pgr_loss_weights* w, pgr_loss_breakdown* out);
pgr_status pgr_cosine_loss(const pgr_normals* pred, const pgr_normals* gt, double* out);
pgr_status pgr_bce_loss(const pgr_raster* prob, const pgr_raster* target, double* out);
pgr_status pgr_focal_loss(const pgr_raster* prob, const pgr_raster* target, double gamma,
                          double* out);
pgr_status pgr_dice_loss(const pgr_raster* prob, const pgr_raster* target, double* out);

/* ---- evaluation -------------------------------------------------------- */

typedef struct pgr_depth_metrics {
  double abs_rel, rmse, delta1;
  long n_used;
} pgr_depth_metrics;

typedef struct pgr_normal_metrics {
  double mean_deg, mse_deg2, frac_below_5, frac_below_22_5;
  long n_used;
} pgr_normal_metrics;

typedef struct pgr_seam_metrics {
  double sdd, sp, ss;
  long pairs, defects;
} pgr_seam_metrics;

pgr_status pgr_depth_metrics_eval(const pgr_depth* pred, const pgr_depth* gt, double lo,
                                  double hi, pgr_depth_metrics* out);
pgr_status pgr_normal_metrics_eval(const pgr_normals* pred, const pgr_normals* gt,
                                   pgr_normal_metrics* out);
pgr_status pgr_seam_metrics_eval(const pgr_depth_cube* cm, double tau, double gamma,
                                 pgr_seam_metrics* out);

/* ---- files ------------------------------------------------------------- */

pgr_status pgr_read_pfm(const char* path, pgr_raster** out);
pgr_status pgr_write_pfm(const char* path, const pgr_raster* img);
/* NaN samples read back as invalid pixels. */
pgr_status pgr_read_depth_pfm(const char* path, int kind, int frame, pgr_depth** out);
pgr_status pgr_write_depth_pfm(const char* path, const pgr_depth* d);
pgr_status pgr_read_normals_pfm(const char* path, int frame, pgr_normals** out);
pgr_status pgr_write_normals_pfm(const char* path, const pgr_normals* n);
/* 16-bit grayscale, depth = raw * scale, raw 0 = invalid. */
pgr_status pgr_read_depth_png16(const char* path, double scale, int kind, int frame,
                                pgr_depth** out);
pgr_status pgr_write_depth_png16(const char* path, const pgr_depth* d, double scale);
pgr_status pgr_write_ply(const char* path, const pgr_cloud* pc, int format);
/* Cubemap stack directory: posx..negz images plus a meta.txt sidecar.
 * scale applies to PGR_STACK_PNG16 only. */
pgr_status pgr_write_depth_stack(const char* dir, const pgr_depth_cube* cm, int format,
                                 double scale);
pgr_status pgr_read_depth_stack(const char* dir, pgr_depth_cube** out);
pgr_status pgr_write_normal_stack(const char* dir, const pgr_normal_cube* nc);
pgr_status pgr_read_normal_stack(const char* dir, pgr_normal_cube** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PANOGEO_H */
