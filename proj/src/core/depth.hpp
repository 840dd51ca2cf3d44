#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "cubemap.hpp"
#include "raster.hpp"

namespace panogeo {

// planar_linear: z-depth along the face forward axis (face frame only)
// planar_log:    log of planar_linear
// euclidean:     ray length, frame independent
enum class DepthKind : int { PlanarLinear = 0, PlanarLog, Euclidean };

const char* depth_kind_name(DepthKind k);
DepthKind depth_kind_from_name(const std::string&);

struct MapFrame {
  bool is_face = false;
  FaceId face = FaceId::PosZ;

  static MapFrame erp() { return {}; }
  static MapFrame face_frame(FaceId f) { return {true, f}; }
};

// Per-pixel depth with validity. data at invalid pixels is unspecified and
// never read by operations here.
struct DepthMap {
  Rasterd data;
  Mask valid;
  DepthKind kind = DepthKind::Euclidean;
  MapFrame frame;
};

enum class NormalFrame { World, FaceLocal };

// Unit normals where valid, camera-facing (n . ray < 0).
struct NormalMap {
  RasterV3 data;
  Mask valid;
  NormalFrame frame = NormalFrame::World;
};

struct PointCloud {
  std::vector<Vec3> points;
  std::vector<std::array<std::uint8_t, 3>> colors;  // empty, or one entry per point
};

// Sky probability in [0, 1]; pixels with prob > threshold are cut.
struct SkyMask {
  Rasterd prob;
  double threshold = 0.5;
};

struct DepthCubemap {
  std::array<DepthMap, kFaceCount> faces;
  int side() const { return faces[0].data.width; }
};

struct NormalCubemap {
  std::array<NormalMap, kFaceCount> faces;
  int side() const { return faces[0].data.width; }
};

// Per-ray scale between planar and euclidean depth on a face chart:
// euclidean = planar * ray_scale(u_c, v_c).
inline double face_ray_scale(double uc, double vc) { return std::sqrt(uc * uc + vc * vc + 1.0); }

// Converts between depth kinds; invalid pixels are copied untouched. The
// planar <-> euclidean crossing needs the face chart, so it requires a square
// face-frame map. Linear-kind sources must be positive where valid.
DepthMap convert_depth(const DepthMap& d, DepthKind to);

// Lifts valid pixels to world-frame points (camera at the origin), row-major
// order. Requires planar_linear kind and a face frame.
PointCloud depth_to_points(const DepthMap& d);

// Normals from central differences of the unprojected positions; border
// pixels use one-sided second-order differences. Output is world frame,
// camera-facing. A pixel is valid only if its whole stencil is valid.
// Requires planar_linear, face frame, side >= 3.
NormalMap depth_to_normals(const DepthMap& d);

// Marks pixels with sky probability above the threshold invalid. normals may
// be null. Shapes must match; prob must lie in [0, 1].
void apply_sky_mask(DepthMap& d, NormalMap* n, const SkyMask& sky);

// Fuses six euclidean face maps into an ERP depth map. Each output pixel
// resamples the single face its direction routes to; it is valid only when
// all four bilinear taps are valid.
DepthMap faces_to_erp_depth(const DepthCubemap& cm, int width);

}  // namespace panogeo
