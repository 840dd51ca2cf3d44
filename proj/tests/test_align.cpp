#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "core/align.hpp"
#include "core/error.hpp"
#include "doctest.h"

using namespace panogeo;

namespace {

DepthMap log_map(int w, int h, double fill = 0.0) {
  return {Rasterd(w, h, fill), Mask(w, h, 1), DepthKind::PlanarLog, MapFrame::erp()};
}

DepthMap lin_map(int w, int h, double fill = 0.0) {
  return {Rasterd(w, h, fill), Mask(w, h, 1), DepthKind::PlanarLinear, MapFrame::erp()};
}

double sse_shift(const DepthMap& pred, const DepthMap& gt, double beta) {
  double s = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.valid.v[i] || !gt.valid.v[i]) continue;
    double r = pred.data.v[i] + beta - gt.data.v[i];
    s += r * r;
  }
  return s;
}

double sse_affine(const DepthMap& pred, const DepthMap& gt, double s, double t) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.valid.v[i] || !gt.valid.v[i]) continue;
    double r = s * pred.data.v[i] + t - gt.data.v[i];
    acc += r * r;
  }
  return acc;
}

}  // namespace

TEST_CASE("log_shift_beta_star") {
  SUBCASE("unit offset") {
    DepthMap gt = log_map(8, 4);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& v : gt.data.v) v = uni(rng);
    DepthMap pred = gt;
    for (double& v : pred.data.v) v -= 1.0;
    ShiftAlignment a = log_shift_beta_star(pred, gt);
    CHECK(a.beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.n_used == 32);
  }

  SUBCASE("matches a grid-search oracle") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int inst = 0; inst < 10; ++inst) {
      DepthMap gt = log_map(16, 8), pred = log_map(16, 8);
      for (double& v : gt.data.v) v = uni(rng);
      for (double& v : pred.data.v) v = uni(rng);
      ShiftAlignment a = log_shift_beta_star(pred, gt);
      double best = a.beta - 0.05, best_sse = sse_shift(pred, gt, best);
      for (int k = 1; k <= 1000; ++k) {
        double b = a.beta - 0.05 + k * 1e-4;
        double s = sse_shift(pred, gt, b);
        if (s < best_sse) {
          best_sse = s;
          best = b;
        }
      }
      CHECK(std::abs(best - a.beta) <= 1e-4 + 1e-12);
      // Local minimality of the closed form.
      CHECK(sse_shift(pred, gt, a.beta) <= sse_shift(pred, gt, a.beta + 1e-3));
      CHECK(sse_shift(pred, gt, a.beta) <= sse_shift(pred, gt, a.beta - 1e-3));
      CHECK(sse_shift(pred, gt, a.beta) <= sse_shift(pred, gt, a.beta + 1e-2));
      CHECK(sse_shift(pred, gt, a.beta) <= sse_shift(pred, gt, a.beta - 1e-2));
    }
  }

  SUBCASE("masked pixels are ignored") {
    DepthMap gt = log_map(4, 4, 2.0), pred = log_map(4, 4, 1.5);
    gt.valid.at(0, 0) = 0;
    gt.data.at(0, 0) = 1e9;
    pred.valid.at(3, 3) = 0;
    pred.data.at(3, 3) = -1e9;
    ShiftAlignment a = log_shift_beta_star(pred, gt);
    CHECK(a.beta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a.n_used == 14);
  }

  SUBCASE("contract") {
    DepthMap gt = log_map(4, 4), pred = log_map(4, 4);
    pred.valid = Mask(4, 4, 0);
    CHECK_THROWS_AS(log_shift_beta_star(pred, gt), DomainError);
    DepthMap lin = lin_map(4, 4, 1.0);
    CHECK_THROWS_AS(log_shift_beta_star(lin, gt), DomainError);
    DepthMap other = log_map(4, 2);
    CHECK_THROWS_AS(log_shift_beta_star(other, gt), DomainError);
  }
}

TEST_CASE("pool_average") {
  SUBCASE("factor 1 is the identity") {
    DepthMap d = log_map(5, 3);
    for (std::size_t i = 0; i < d.data.size(); ++i) d.data.v[i] = double(i);
    AnchorGrid g = pool_average(d, 1);
    CHECK(g.values.v == d.data.v);
    for (double f : g.valid_fraction.v) CHECK(f == 1.0);
  }

  SUBCASE("4x4 ramp pools to its mean") {
    DepthMap d = log_map(4, 4);
    for (std::size_t i = 0; i < 16; ++i) d.data.v[i] = double(i);
    AnchorGrid g = pool_average(d, 4);
    REQUIRE(g.values.width == 1);
    REQUIRE(g.values.height == 1);
    CHECK(g.values.at(0, 0) == 7.5);
    CHECK(g.valid.at(0, 0) == 1);
  }

  SUBCASE("clipped boundary cells match a brute-force oracle") {
    DepthMap d = log_map(5, 3);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& v : d.data.v) v = uni(rng);
    const int factor = 2;
    AnchorGrid g = pool_average(d, factor);
    REQUIRE(g.values.width == 3);
    REQUIRE(g.values.height == 2);
    for (int cy = 0; cy < 2; ++cy)
      for (int cx = 0; cx < 3; ++cx) {
        double sum = 0.0;
        int n = 0, area = 0;
        for (int y = cy * factor; y < std::min((cy + 1) * factor, 3); ++y)
          for (int x = cx * factor; x < std::min((cx + 1) * factor, 5); ++x) {
            sum += d.data.at(x, y);
            ++n;
            ++area;
          }
        CHECK(g.values.at(cx, cy) == doctest::Approx(sum / n).epsilon(1e-14));
        CHECK(g.valid_fraction.at(cx, cy) == double(n) / area);
      }
  }

  SUBCASE("holes lower the valid fraction and drop from the mean") {
    DepthMap d = log_map(4, 4, 2.0);
    d.data.at(0, 0) = 100.0;
    d.valid.at(0, 0) = 0;
    AnchorGrid g = pool_average(d, 2);
    CHECK(g.valid_fraction.at(0, 0) == 0.75);
    CHECK(g.values.at(0, 0) == 2.0);
    d.valid.at(1, 0) = d.valid.at(0, 1) = d.valid.at(1, 1) = 0;
    g = pool_average(d, 2);
    CHECK(g.valid.at(0, 0) == 0);
    CHECK(g.valid_fraction.at(0, 0) == 0.0);
    CHECK(g.valid.at(1, 0) == 1);
  }

  SUBCASE("contract") {
    DepthMap d = log_map(4, 4);
    CHECK_THROWS_AS(pool_average(d, 0), DomainError);
    CHECK_THROWS_AS(pool_average(DepthMap{}, 2), DomainError);
  }
}

TEST_CASE("median_metric_scale") {
  auto si_fixture = [] {
    DepthMap si = log_map(16, 16);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& v : si.data.v) v = uni(rng);
    return si;
  };

  SUBCASE("recovers a planted constant offset exactly") {
    DepthMap si = si_fixture();
    AnchorGrid pooled = pool_average(si, 4);
    DepthMap coarse{pooled.values, pooled.valid, DepthKind::PlanarLog, MapFrame::erp()};
    for (std::size_t i = 0; i < coarse.data.size(); ++i) coarse.data.v[i] += 0.7;
    ShiftAlignment a = median_metric_scale(coarse, si, 4);
    CHECK(a.beta == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(a.n_used == 16);
  }

  SUBCASE("median shrugs off 40% corrupted anchors") {
    DepthMap si = si_fixture();
    AnchorGrid pooled = pool_average(si, 4);
    DepthMap coarse{pooled.values, pooled.valid, DepthKind::PlanarLog, MapFrame::erp()};
    for (std::size_t i = 0; i < coarse.data.size(); ++i) coarse.data.v[i] += 0.7;
    for (std::size_t i = 0; i < 6; ++i) coarse.data.v[i] += 10.0;  // 6 of 16 anchors
    ShiftAlignment a = median_metric_scale(coarse, si, 4);
    CHECK(a.beta == doctest::Approx(0.7).epsilon(1e-15));
  }

  SUBCASE("full-shape coarse equals pooled-shape coarse") {
    DepthMap si = si_fixture();
    DepthMap coarse_full = si;
    for (double& v : coarse_full.data.v) v += 0.7;
    ShiftAlignment full = median_metric_scale(coarse_full, si, 4);
    AnchorGrid pooled = pool_average(si, 4);
    DepthMap coarse_small{pooled.values, pooled.valid, DepthKind::PlanarLog, MapFrame::erp()};
    for (double& v : coarse_small.data.v) v += 0.7;
    ShiftAlignment small = median_metric_scale(coarse_small, si, 4);
    CHECK(full.beta == doctest::Approx(small.beta).epsilon(1e-12));
    CHECK(full.n_used == small.n_used);
  }

  SUBCASE("even anchor counts average the central pair") {
    DepthMap si = log_map(4, 1, 0.0);
    DepthMap coarse = log_map(4, 1, 0.0);
    coarse.data.v = {1.0, 2.0, 4.0, 8.0};
    ShiftAlignment a = median_metric_scale(coarse, si, 1);
    CHECK(a.beta == 3.0);
    CHECK(a.n_used == 4);
  }

  SUBCASE("contract") {
    DepthMap si = si_fixture();
    DepthMap coarse = log_map(3, 3);
    CHECK_THROWS_AS(median_metric_scale(coarse, si, 4), DomainError);
    DepthMap lin = lin_map(16, 16, 1.0);
    CHECK_THROWS_AS(median_metric_scale(lin, si, 4), DomainError);
    DepthMap disjoint = si;
    disjoint.valid = Mask(16, 16, 0);
    CHECK_THROWS_AS(median_metric_scale(disjoint, si, 4), DomainError);
  }
}

TEST_CASE("apply_metric_scale") {
  SUBCASE("zero beta is the identity") {
    DepthMap lin = lin_map(4, 4, 2.0);
    CHECK(apply_metric_scale(lin, 0.0).data.v == lin.data.v);
    DepthMap lg = log_map(4, 4, -0.3);
    CHECK(apply_metric_scale(lg, 0.0).data.v == lg.data.v);
  }

  SUBCASE("linear kinds scale by exp(beta)") {
    DepthMap lin = lin_map(2, 2, 2.0);
    DepthMap out = apply_metric_scale(lin, std::log(3.0));
    for (double v : out.data.v) CHECK(v == doctest::Approx(6.0).epsilon(1e-14));
  }

  SUBCASE("log and linear application commute") {
    DepthMap lin = lin_map(4, 4);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> uni(0.5, 5.0);
    for (double& v : lin.data.v) v = uni(rng);
    DepthMap lg = convert_depth(lin, DepthKind::PlanarLog);
    const double beta = 0.42;
    DepthMap a = convert_depth(apply_metric_scale(lin, beta), DepthKind::PlanarLog);
    DepthMap b = apply_metric_scale(lg, beta);
    for (std::size_t i = 0; i < a.data.size(); ++i)
      CHECK(a.data.v[i] == doctest::Approx(b.data.v[i]).epsilon(1e-12));
  }

  SUBCASE("invalid pixels are untouched") {
    DepthMap lin = lin_map(2, 2, 2.0);
    lin.valid.at(0, 0) = 0;
    lin.data.at(0, 0) = -5.0;
    DepthMap out = apply_metric_scale(lin, 1.0);
    CHECK(out.data.at(0, 0) == -5.0);
  }
}

TEST_CASE("lstsq_scale_shift") {
  auto gt_fixture = [](int seed) {
    DepthMap gt = lin_map(16, 8);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(1.0, 10.0);
    for (double& v : gt.data.v) v = uni(rng);
    return gt;
  };

  SUBCASE("inverts a planted affine map") {
    DepthMap gt = gt_fixture(41);
    DepthMap pred = gt;
    for (double& v : pred.data.v) v = (v - 5.0) / 2.0;
    AffineAlignment a = lstsq_scale_shift(pred, gt);
    CHECK_FALSE(a.shift_only);
    CHECK(a.scale == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(a.shift == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(a.n_used == 128);
    DepthMap aligned = apply_affine(pred, a.scale, a.shift);
    for (std::size_t i = 0; i < gt.data.size(); ++i)
      CHECK(aligned.data.v[i] == doctest::Approx(gt.data.v[i]).epsilon(1e-9));
  }

  SUBCASE("identity map") {
    DepthMap gt = gt_fixture(43);
    AffineAlignment a = lstsq_scale_shift(gt, gt);
    CHECK(a.scale == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(a.shift) < 1e-10);
  }

  SUBCASE("beats random candidates and has zero gradient") {
    DepthMap gt = gt_fixture(47);
    DepthMap pred = gt_fixture(53);
    AffineAlignment a = lstsq_scale_shift(pred, gt);
    double best = sse_affine(pred, gt, a.scale, a.shift);
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    for (int k = 0; k < 10000; ++k) {
      CHECK(best <= sse_affine(pred, gt, a.scale + uni(rng), a.shift + uni(rng)) + 1e-12);
    }
    // Normal-equation residual: both partial derivatives vanish.
    double gs = 0.0, gtd = 0.0;
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
      double r = a.scale * pred.data.v[i] + a.shift - gt.data.v[i];
      gs += 2.0 * r * pred.data.v[i];
      gtd += 2.0 * r;
    }
    CHECK(std::abs(gs) < 1e-8 * pred.data.size());
    CHECK(std::abs(gtd) < 1e-8 * pred.data.size());
  }

  SUBCASE("gt scaling equivariance") {
    DepthMap gt = gt_fixture(61);
    DepthMap pred = gt_fixture(67);
    AffineAlignment a = lstsq_scale_shift(pred, gt);
    DepthMap gt2 = gt;
    for (double& v : gt2.data.v) v *= 3.0;
    AffineAlignment b = lstsq_scale_shift(pred, gt2);
    CHECK(b.scale == doctest::Approx(3.0 * a.scale).epsilon(1e-10));
    CHECK(b.shift == doctest::Approx(3.0 * a.shift).epsilon(1e-10));
  }

  SUBCASE("constant pred degenerates to a flagged shift fit") {
    DepthMap gt = gt_fixture(71);
    DepthMap pred = lin_map(16, 8, 4.0);
    AffineAlignment a = lstsq_scale_shift(pred, gt);
    CHECK(a.shift_only);
    CHECK(a.scale == 1.0);
    double mean_gt = 0.0;
    for (double v : gt.data.v) mean_gt += v;
    mean_gt /= gt.data.size();
    CHECK(a.shift == doctest::Approx(mean_gt - 4.0).epsilon(1e-12));
  }

  SUBCASE("contract") {
    DepthMap gt = gt_fixture(73);
    DepthMap lg = log_map(16, 8);
    CHECK_THROWS_AS(lstsq_scale_shift(lg, gt), DomainError);
    CHECK_THROWS_AS(lstsq_scale_shift(gt, lg), DomainError);
    DepthMap none = gt;
    none.valid = Mask(16, 8, 0);
    CHECK_THROWS_AS(lstsq_scale_shift(none, gt), DomainError);
    CHECK_THROWS_AS(apply_affine(lg, 1.0, 0.0), DomainError);
  }
}

TEST_CASE("apply_affine") {
  DepthMap d = lin_map(2, 2, 3.0);
  d.valid.at(1, 1) = 0;
  d.data.at(1, 1) = 9.0;
  DepthMap out = apply_affine(d, 2.0, 1.0);
  CHECK(out.data.at(0, 0) == 7.0);
  CHECK(out.data.at(1, 1) == 9.0);
}
