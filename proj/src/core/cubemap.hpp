#pragma once

#include <array>
#include <string>

#include "raster.hpp"
#include "vec3.hpp"

namespace panogeo {

// Serialization order; also the tie-break order when a direction lies on a
// face boundary.
enum class FaceId : int { PosX = 0, NegX, PosY, NegY, PosZ, NegZ };

constexpr int kFaceCount = 6;

const char* face_name(FaceId f);            // "posx" .. "negz"
FaceId face_from_name(const std::string&);  // DomainError on unknown name

// Orthonormal face frame. A face chart point (u_c, v_c) in [-1, 1]^2 maps to
// the direction u_c * right + v_c * up + forward (then normalized); the 90
// degree field of view puts face edges at |u_c| = |v_c| = 1.
struct FaceBasis {
  Vec3 right, up, forward;
};

const FaceBasis& face_basis(FaceId f);

// Pinhole model of one face: fx = fy = side / 2, principal point at the face
// center, rotation given by face_basis. Pixel centers sit at index + 0.5, so
// in index coordinates cx = cy = (side - 1) / 2.
struct FaceCamera {
  FaceId face = FaceId::PosZ;
  int side = 0;

  double fx() const { return side / 2.0; }
  double cx() const { return (side - 1) / 2.0; }
};

// Chart <-> pixel-index maps for a square face raster. Column x covers
// u_c in [2x/side - 1, 2(x+1)/side - 1]; row 0 is the top (v_c near 1).
inline double face_u_from_px(double x, int side) { return 2.0 * (x + 0.5) / side - 1.0; }
inline double face_v_from_py(double y, int side) { return 1.0 - 2.0 * (y + 0.5) / side; }
inline double face_px_from_u(double uc, int side) { return (uc + 1.0) * 0.5 * side - 0.5; }
inline double face_py_from_v(double vc, int side) { return (1.0 - vc) * 0.5 * side - 0.5; }

Vec3 face_dir_from_uv(FaceId f, double uc, double vc);

struct FaceHit {
  FaceId face;
  double uc, vc;
};

// Routes a nonzero direction to the face whose forward axis dominates;
// boundary ties resolve to the first face in FaceId order. |uc|, |vc| <= 1.
FaceHit uv_face_from_dir(const Vec3& d);

struct Cubemap {
  int side = 0;
  std::array<Rasterd, kFaceCount> faces;
};

// Resamples an equirectangular raster (width = 2 * height) onto six square
// faces, bilinear taps with seam wrap. side >= 2.
Cubemap erp_to_cubemap(const Rasterd& erp, int side);

// Inverse resampling at ERP pixel centers. Each output pixel reads exactly
// one face (clamped bilinear), so no cross-face blending occurs. width even,
// >= 4.
Rasterd cubemap_to_erp(const Cubemap& cm, int width);

enum class EdgeId : int { Top = 0, Bottom, Left, Right };

const char* edge_name(EdgeId e);

// Directed edge link: the neighbor face sharing this border, which of the
// neighbor's edges it is, and whether the index along the edge reverses.
struct EdgeLink {
  FaceId nbr_face;
  EdgeId nbr_edge;
  bool reversed;
};

// All 24 directed entries (12 undirected edges). The table is derived from
// the face geometry at startup, not hand-written, and satisfies the
// involution at(at(f, e)) == (f, e).
struct EdgeAdjacency {
  std::array<std::array<EdgeLink, 4>, kFaceCount> link;

  const EdgeLink& at(FaceId f, EdgeId e) const {
    return link[static_cast<int>(f)][static_cast<int>(e)];
  }
};

const EdgeAdjacency& cube_adjacency();

struct Pixel {
  int x, y;
};

// Pixel at position idx along an edge, depth pixels inward from the border.
// Top/bottom edges index left to right, left/right edges top to bottom.
Pixel border_pixel(EdgeId e, int idx, int depth, int side);

enum class PadMode { CrossFace, Zero };

// Returns each face grown by pad pixels per side, (side + 2 pad)^2. CrossFace
// fills the pad strips by copying neighbor border pixels through the
// adjacency table (a verbatim gather; the sub-pixel gnomonic misalignment of
// up to 0.75 px is accepted). Corner blocks replicate the last pixel of the
// horizontally adjacent strip row-wise. Zero leaves every pad pixel 0.
// Requires 0 <= pad <= side.
std::array<Rasterd, kFaceCount> cross_face_pad(const Cubemap& cm, int pad, PadMode mode);

}  // namespace panogeo
