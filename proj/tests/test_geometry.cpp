#include <algorithm>
#include <cmath>
#include <random>

#include "core/depth.hpp"
#include "core/error.hpp"
#include "core/spherical.hpp"
#include "doctest.h"

using namespace panogeo;

namespace {

DepthMap make_map(int w, int h, DepthKind kind, MapFrame frame, double fill) {
  return {Rasterd(w, h, fill), Mask(w, h, 1), kind, frame};
}

DepthMap face_map(int side, DepthKind kind, FaceId f, double fill) {
  return make_map(side, side, kind, MapFrame::face_frame(f), fill);
}

}  // namespace

TEST_CASE("face_ray_scale") {
  CHECK(face_ray_scale(0, 0) == 1.0);
  CHECK(face_ray_scale(1, 1) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(face_ray_scale(-1, 1) == face_ray_scale(1, -1));
}

TEST_CASE("convert_depth") {
  SUBCASE("euclidean to planar at an odd-side center is exact") {
    DepthMap e = face_map(3, DepthKind::Euclidean, FaceId::PosZ, 2.0);
    DepthMap p = convert_depth(e, DepthKind::PlanarLinear);
    CHECK(p.kind == DepthKind::PlanarLinear);
    CHECK(p.data.at(1, 1) == 2.0);
    double uc = face_u_from_px(0, 3), vc = face_v_from_py(0, 3);
    CHECK(p.data.at(0, 0) == doctest::Approx(2.0 / face_ray_scale(uc, vc)).epsilon(1e-15));
    DepthMap back = convert_depth(p, DepthKind::Euclidean);
    for (double v : back.data.v) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  }

  SUBCASE("log/linear round trip") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.5, 5.0);
    DepthMap p = face_map(8, DepthKind::PlanarLinear, FaceId::NegX, 0);
    for (double& v : p.data.v) v = uni(rng);
    DepthMap back = convert_depth(convert_depth(p, DepthKind::PlanarLog), DepthKind::PlanarLinear);
    for (std::size_t i = 0; i < p.data.size(); ++i)
      CHECK(back.data.v[i] == doctest::Approx(p.data.v[i]).epsilon(1e-14));
  }

  SUBCASE("every ordered kind pair round trips") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> uni(0.5, 5.0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        DepthKind ka = static_cast<DepthKind>(a), kb = static_cast<DepthKind>(b);
        DepthMap m = face_map(8, ka, FaceId::PosY, 0);
        for (double& v : m.data.v) v = ka == DepthKind::PlanarLog ? std::log(uni(rng)) : uni(rng);
        DepthMap back = convert_depth(convert_depth(m, kb), ka);
        for (std::size_t i = 0; i < m.data.size(); ++i)
          CHECK(back.data.v[i] == doctest::Approx(m.data.v[i]).epsilon(1e-9));
      }
  }

  SUBCASE("same-kind conversion is a copy") {
    DepthMap p = face_map(4, DepthKind::PlanarLog, FaceId::PosZ, -0.25);
    DepthMap out = convert_depth(p, DepthKind::PlanarLog);
    CHECK(out.data.v == p.data.v);
  }

  SUBCASE("invalid pixels pass through untouched") {
    DepthMap p = face_map(4, DepthKind::PlanarLinear, FaceId::PosZ, 1.0);
    p.valid.at(2, 1) = 0;
    p.data.at(2, 1) = -7.0;
    DepthMap out = convert_depth(p, DepthKind::Euclidean);
    CHECK(out.data.at(2, 1) == -7.0);
    CHECK(out.valid.at(2, 1) == 0);
  }

  SUBCASE("nonpositive valid depth is rejected") {
    DepthMap p = face_map(4, DepthKind::PlanarLinear, FaceId::PosZ, 1.0);
    p.data.at(0, 0) = 0.0;
    CHECK_THROWS_AS(convert_depth(p, DepthKind::PlanarLog), DomainError);
    p.data.at(0, 0) = -1.0;
    CHECK_THROWS_AS(convert_depth(p, DepthKind::Euclidean), DomainError);
  }

  SUBCASE("planar/euclidean crossing needs a square face frame") {
    DepthMap erp = make_map(8, 4, DepthKind::Euclidean, MapFrame::erp(), 1.0);
    CHECK_THROWS_AS(convert_depth(erp, DepthKind::PlanarLinear), DomainError);
    CHECK_THROWS_AS(convert_depth(erp, DepthKind::PlanarLog), DomainError);
    DepthMap rect = make_map(8, 4, DepthKind::Euclidean, MapFrame::face_frame(FaceId::PosZ), 1.0);
    CHECK_THROWS_AS(convert_depth(rect, DepthKind::PlanarLinear), DomainError);
    // No crossing: log <-> linear works on any frame.
    DepthMap lin = make_map(8, 4, DepthKind::PlanarLinear, MapFrame::erp(), 2.0);
    DepthMap lg = convert_depth(lin, DepthKind::PlanarLog);
    CHECK(lg.data.at(0, 0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  }
}

TEST_CASE("depth_to_points") {
  SUBCASE("constant depth on PosZ") {
    DepthMap p = face_map(3, DepthKind::PlanarLinear, FaceId::PosZ, 2.0);
    PointCloud pc = depth_to_points(p);
    REQUIRE(pc.points.size() == 9);
    CHECK(pc.points[4].x == 0.0);
    CHECK(pc.points[4].y == 0.0);
    CHECK(pc.points[4].z == 2.0);
    CHECK(pc.points[0].x == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(pc.points[0].y == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(pc.points[0].z == 2.0);
  }

  SUBCASE("unit sphere points have unit radius") {
    DepthMap e = face_map(16, DepthKind::Euclidean, FaceId::PosY, 1.0);
    PointCloud pc = depth_to_points(convert_depth(e, DepthKind::PlanarLinear));
    REQUIRE(pc.points.size() == 256);
    for (const Vec3& q : pc.points) CHECK(norm(q) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("row-major order over valid pixels") {
    DepthMap p = face_map(2, DepthKind::PlanarLinear, FaceId::PosZ, 1.0);
    p.valid.at(0, 0) = 0;
    p.valid.at(1, 1) = 0;
    PointCloud pc = depth_to_points(p);
    REQUIRE(pc.points.size() == 2);
    CHECK(pc.points[0].x == 0.5);   // pixel (1, 0)
    CHECK(pc.points[0].y == 0.5);
    CHECK(pc.points[1].x == -0.5);  // pixel (0, 1)
    CHECK(pc.points[1].y == -0.5);
  }

  SUBCASE("rejects wrong kind or frame") {
    CHECK_THROWS_AS(depth_to_points(face_map(4, DepthKind::Euclidean, FaceId::PosZ, 1.0)),
                    DomainError);
    CHECK_THROWS_AS(depth_to_points(make_map(4, 2, DepthKind::PlanarLinear, MapFrame::erp(), 1.0)),
                    DomainError);
  }
}

TEST_CASE("depth_to_normals") {
  SUBCASE("frontal plane gives -forward everywhere, borders included") {
    DepthMap p = face_map(9, DepthKind::PlanarLinear, FaceId::PosZ, 2.0);
    NormalMap nm = depth_to_normals(p);
    CHECK(nm.frame == NormalFrame::World);
    CHECK(count_valid(nm.valid) == 81);
    for (int y = 0; y < 9; ++y)
      for (int x = 0; x < 9; ++x) {
        CHECK(std::abs(nm.data.at(x, y).x) < 1e-12);
        CHECK(nm.data.at(x, y).z == doctest::Approx(-1.0).epsilon(1e-12));
      }
  }

  SUBCASE("tilted plane normals are exact") {
    // Positions sampled from a plane make every finite-difference tangent lie
    // in the plane, so the cross product recovers the normal exactly.
    Vec3 mloc = normalized({0.2, 0.3, 1.0});
    const double b = 2.0;
    const int side = 32;
    DepthMap p = face_map(side, DepthKind::PlanarLinear, FaceId::PosX, 0);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        double uc = face_u_from_px(x, side), vc = face_v_from_py(y, side);
        p.data.at(x, y) = b / (mloc.x * uc + mloc.y * vc + mloc.z);
      }
    NormalMap nm = depth_to_normals(p);
    const FaceBasis& fb = face_basis(FaceId::PosX);
    Vec3 want = -1.0 * (mloc.x * fb.right + mloc.y * fb.up + mloc.z * fb.forward);
    CHECK(count_valid(nm.valid) == side * side);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        CHECK(nm.data.at(x, y).x == doctest::Approx(want.x).epsilon(1e-12));
        CHECK(nm.data.at(x, y).y == doctest::Approx(want.y).epsilon(1e-12));
        CHECK(nm.data.at(x, y).z == doctest::Approx(want.z).epsilon(1e-12));
      }
  }

  SUBCASE("unit sphere normals point back along the ray") {
    const int side = 128;
    DepthMap e = face_map(side, DepthKind::Euclidean, FaceId::NegZ, 1.0);
    NormalMap nm = depth_to_normals(convert_depth(e, DepthKind::PlanarLinear));
    REQUIRE(count_valid(nm.valid) == side * side);
    double worst = 0.0;
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        Vec3 dir =
            face_dir_from_uv(FaceId::NegZ, face_u_from_px(x, side), face_v_from_py(y, side));
        Vec3 n = nm.data.at(x, y);
        worst = std::max({worst, std::abs(n.x + dir.x), std::abs(n.y + dir.y),
                          std::abs(n.z + dir.z)});
      }
    CHECK(worst < 1e-3);
  }

  SUBCASE("outputs are unit and camera-facing") {
    const int side = 24;
    DepthMap p = face_map(side, DepthKind::PlanarLinear, FaceId::NegY, 0);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        double uc = face_u_from_px(x, side), vc = face_v_from_py(y, side);
        p.data.at(x, y) = 2.0 + 0.3 * std::sin(2.0 * uc) * std::cos(vc);
      }
    NormalMap nm = depth_to_normals(p);
    for (int y = 0; y < side; ++y)
      for (int x = 0; x < side; ++x) {
        if (!nm.valid.at(x, y)) continue;
        Vec3 n = nm.data.at(x, y);
        CHECK(norm(n) == doctest::Approx(1.0).epsilon(1e-12));
        Vec3 dir = face_dir_from_uv(FaceId::NegY, face_u_from_px(x, side), face_v_from_py(y, side));
        CHECK(dot(n, dir) < 1e-12);
      }
  }

  SUBCASE("an invalid pixel knocks out exactly its stencil dependents") {
    DepthMap p = face_map(9, DepthKind::PlanarLinear, FaceId::PosZ, 2.0);
    p.valid.at(4, 4) = 0;
    NormalMap nm = depth_to_normals(p);
    CHECK(count_valid(nm.valid) == 81 - 5);
    CHECK(nm.valid.at(4, 4) == 0);
    CHECK(nm.valid.at(3, 4) == 0);
    CHECK(nm.valid.at(5, 4) == 0);
    CHECK(nm.valid.at(4, 3) == 0);
    CHECK(nm.valid.at(4, 5) == 0);
    CHECK(nm.valid.at(3, 3) == 1);
  }

  SUBCASE("input contract") {
    CHECK_THROWS_AS(depth_to_normals(face_map(9, DepthKind::Euclidean, FaceId::PosZ, 1.0)),
                    DomainError);
    CHECK_THROWS_AS(depth_to_normals(make_map(9, 9, DepthKind::PlanarLinear, MapFrame::erp(), 1.0)),
                    DomainError);
    CHECK_THROWS_AS(depth_to_normals(face_map(2, DepthKind::PlanarLinear, FaceId::PosZ, 1.0)),
                    DomainError);
    CHECK_THROWS_AS(
        depth_to_normals(make_map(4, 5, DepthKind::PlanarLinear, MapFrame::face_frame(FaceId::PosZ), 1.0)),
        DomainError);
  }
}

TEST_CASE("apply_sky_mask") {
  DepthMap d = face_map(4, DepthKind::Euclidean, FaceId::PosZ, 3.0);
  NormalMap nm;
  nm.data = RasterV3(4, 4, {0, 0, -1});
  nm.valid = Mask(4, 4, 1);

  SUBCASE("zero probability changes nothing") {
    SkyMask sky{Rasterd(4, 4, 0.0), 0.5};
    apply_sky_mask(d, &nm, sky);
    CHECK(count_valid(d.valid) == 16);
    CHECK(count_valid(nm.valid) == 16);
  }

  SUBCASE("certain sky cuts everything") {
    SkyMask sky{Rasterd(4, 4, 1.0), 0.5};
    apply_sky_mask(d, &nm, sky);
    CHECK(count_valid(d.valid) == 0);
    CHECK(count_valid(nm.valid) == 0);
  }

  SUBCASE("threshold is strict") {
    SkyMask sky{Rasterd(4, 4, 0.6), 0.6};
    apply_sky_mask(d, nullptr, sky);
    CHECK(count_valid(d.valid) == 16);
    sky.threshold = 0.59;
    apply_sky_mask(d, nullptr, sky);
    CHECK(count_valid(d.valid) == 0);
  }

  SUBCASE("partial mask hits only flagged pixels") {
    SkyMask sky{Rasterd(4, 4, 0.0), 0.5};
    for (int x = 0; x < 4; ++x) sky.prob.at(x, 0) = 0.9;
    apply_sky_mask(d, &nm, sky);
    CHECK(count_valid(d.valid) == 12);
    for (int x = 0; x < 4; ++x) {
      CHECK(d.valid.at(x, 0) == 0);
      CHECK(nm.valid.at(x, 0) == 0);
    }
  }

  SUBCASE("contract violations") {
    SkyMask bad{Rasterd(3, 4, 0.0), 0.5};
    CHECK_THROWS_AS(apply_sky_mask(d, nullptr, bad), DomainError);
    SkyMask outside{Rasterd(4, 4, 1.5), 0.5};
    CHECK_THROWS_AS(apply_sky_mask(d, nullptr, outside), DomainError);
    SkyMask badthr{Rasterd(4, 4, 0.0), -0.1};
    CHECK_THROWS_AS(apply_sky_mask(d, nullptr, badthr), DomainError);
    NormalMap small;
    small.data = RasterV3(2, 2);
    small.valid = Mask(2, 2, 1);
    SkyMask ok{Rasterd(4, 4, 0.0), 0.5};
    CHECK_THROWS_AS(apply_sky_mask(d, &small, ok), DomainError);
  }
}

TEST_CASE("faces_to_erp_depth") {
  auto cube_of = [](int side, double fill) {
    DepthCubemap cm;
    for (int fi = 0; fi < kFaceCount; ++fi)
      cm.faces[fi] = {Rasterd(side, side, fill), Mask(side, side, 1), DepthKind::Euclidean,
                      MapFrame::face_frame(static_cast<FaceId>(fi))};
    return cm;
  };

  SUBCASE("constant faces fuse to a constant ERP map") {
    DepthMap erp = faces_to_erp_depth(cube_of(8, 3.0), 32);
    CHECK(erp.kind == DepthKind::Euclidean);
    CHECK(count_valid(erp.valid) == 32 * 16);
    for (double v : erp.data.v) CHECK(v == 3.0);
  }

  SUBCASE("an invalid face blanks exactly its routing cell") {
    DepthCubemap cm = cube_of(8, 3.0);
    cm.faces[static_cast<int>(FaceId::NegY)].valid = Mask(8, 8, 0);
    DepthMap erp = faces_to_erp_depth(cm, 64);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 64; ++x) {
        double u = (x + 0.5) / 64, v = 1.0 - (y + 0.5) / 32;
        FaceHit h = uv_face_from_dir(direction_from_angles(angles_from_erp_uv(u, v)));
        CHECK(static_cast<bool>(erp.valid.at(x, y)) == (h.face != FaceId::NegY));
      }
  }

  SUBCASE("contract violations") {
    DepthCubemap cm = cube_of(8, 3.0);
    cm.faces[2].kind = DepthKind::PlanarLinear;
    CHECK_THROWS_AS(faces_to_erp_depth(cm, 32), DomainError);
    cm = cube_of(8, 3.0);
    CHECK_THROWS_AS(faces_to_erp_depth(cm, 31), DomainError);
    cm.faces[1].data = Rasterd(4, 4, 3.0);
    cm.faces[1].valid = Mask(4, 4, 1);
    CHECK_THROWS_AS(faces_to_erp_depth(cm, 32), DomainError);
    cm = cube_of(8, 3.0);
    cm.faces[3].frame = MapFrame::erp();
    CHECK_THROWS_AS(faces_to_erp_depth(cm, 32), DomainError);
  }
}
