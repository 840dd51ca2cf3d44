#include "align.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"

namespace panogeo {

namespace {

void check_pair(const DepthMap& a, const DepthMap& b) {
  if (a.data.empty() || b.data.empty()) throw DomainError("empty depth map");
  if (!a.data.same_shape(a.valid) || !b.data.same_shape(b.valid))
    throw DomainError("depth/validity shape mismatch");
  if (!a.data.same_shape(b.data)) throw DomainError("depth map shapes differ");
}

void require_log(const DepthMap& d, const char* what) {
  if (d.kind != DepthKind::PlanarLog)
    throw DomainError(std::string(what) + " requires planar_log maps");
}

}  // namespace

ShiftAlignment log_shift_beta_star(const DepthMap& pred_log, const DepthMap& gt_log) {
  check_pair(pred_log, gt_log);
  require_log(pred_log, "log_shift_beta_star");
  require_log(gt_log, "log_shift_beta_star");
  double sum = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < pred_log.data.size(); ++i) {
    if (!pred_log.valid.v[i] || !gt_log.valid.v[i]) continue;
    sum += gt_log.data.v[i] - pred_log.data.v[i];
    ++n;
  }
  if (n == 0) throw DomainError("no jointly valid pixels to align");
  return {sum / n, n};
}

AnchorGrid pool_average(const DepthMap& d, int factor) {
  if (d.data.empty()) throw DomainError("empty depth map");
  if (!d.data.same_shape(d.valid)) throw DomainError("depth/validity shape mismatch");
  if (factor < 1) throw DomainError("pooling factor must be >= 1");
  const int w = d.data.width, h = d.data.height;
  const int pw = (w + factor - 1) / factor, ph = (h + factor - 1) / factor;
  AnchorGrid g;
  g.factor = factor;
  g.values = Rasterd(pw, ph);
  g.valid_fraction = Rasterd(pw, ph);
  g.valid = Mask(pw, ph, 0);
  for (int cy = 0; cy < ph; ++cy) {
    for (int cx = 0; cx < pw; ++cx) {
      int x1 = std::min((cx + 1) * factor, w), y1 = std::min((cy + 1) * factor, h);
      double sum = 0.0;
      long n = 0, area = 0;
      for (int y = cy * factor; y < y1; ++y) {
        for (int x = cx * factor; x < x1; ++x) {
          ++area;
          if (!d.valid.at(x, y)) continue;
          sum += d.data.at(x, y);
          ++n;
        }
      }
      g.valid_fraction.at(cx, cy) = static_cast<double>(n) / area;
      if (n > 0) {
        g.values.at(cx, cy) = sum / n;
        g.valid.at(cx, cy) = 1;
      }
    }
  }
  return g;
}

ShiftAlignment median_metric_scale(const DepthMap& coarse_log, const DepthMap& si_log, int factor) {
  if (coarse_log.data.empty() || si_log.data.empty()) throw DomainError("empty depth map");
  require_log(coarse_log, "median_metric_scale");
  require_log(si_log, "median_metric_scale");
  AnchorGrid pooled = pool_average(si_log, factor);

  const DepthMap* coarse = &coarse_log;
  DepthMap pooled_coarse;
  if (coarse_log.data.same_shape(si_log.data) && !coarse_log.data.same_shape(pooled.values)) {
    AnchorGrid g = pool_average(coarse_log, factor);
    pooled_coarse.data = std::move(g.values);
    pooled_coarse.valid = std::move(g.valid);
    pooled_coarse.kind = DepthKind::PlanarLog;
    pooled_coarse.frame = coarse_log.frame;
    coarse = &pooled_coarse;
  }
  if (!coarse->data.same_shape(pooled.values))
    throw DomainError("coarse map matches neither the pooled nor the full shape");

  std::vector<double> diffs;
  diffs.reserve(pooled.values.size());
  for (std::size_t i = 0; i < pooled.values.size(); ++i) {
    if (!pooled.valid.v[i] || !coarse->valid.v[i]) continue;
    diffs.push_back(coarse->data.v[i] - pooled.values.v[i]);
  }
  if (diffs.empty()) throw DomainError("no jointly valid anchors");
  std::sort(diffs.begin(), diffs.end());
  std::size_t m = diffs.size();
  double beta = (m % 2) ? diffs[m / 2] : 0.5 * (diffs[m / 2 - 1] + diffs[m / 2]);
  return {beta, static_cast<long>(m)};
}

DepthMap apply_metric_scale(const DepthMap& si, double beta) {
  if (si.data.empty()) throw DomainError("empty depth map");
  if (!si.data.same_shape(si.valid)) throw DomainError("depth/validity shape mismatch");
  DepthMap out = si;
  if (si.kind == DepthKind::PlanarLog) {
    for (std::size_t i = 0; i < out.data.size(); ++i)
      if (out.valid.v[i]) out.data.v[i] += beta;
  } else {
    double s = std::exp(beta);
    for (std::size_t i = 0; i < out.data.size(); ++i)
      if (out.valid.v[i]) out.data.v[i] *= s;
  }
  return out;
}

AffineAlignment lstsq_scale_shift(const DepthMap& pred, const DepthMap& gt) {
  check_pair(pred, gt);
  if (pred.kind == DepthKind::PlanarLog || gt.kind == DepthKind::PlanarLog)
    throw DomainError("lstsq_scale_shift works on linear-kind maps");
  double sp = 0, sg = 0, spp = 0, spg = 0;
  long n = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.valid.v[i] || !gt.valid.v[i]) continue;
    double p = pred.data.v[i], g = gt.data.v[i];
    sp += p;
    sg += g;
    spp += p * p;
    spg += p * g;
    ++n;
  }
  if (n == 0) throw DomainError("no jointly valid pixels to align");
  double var = spp - sp * sp / n;
  if (!(var > 1e-12 * std::max(spp, 1.0))) return {1.0, (sg - sp) / n, n, true};
  double scale = (spg - sp * sg / n) / var;
  return {scale, (sg - scale * sp) / n, n, false};
}

DepthMap apply_affine(const DepthMap& d, double scale, double shift) {
  if (d.data.empty()) throw DomainError("empty depth map");
  if (!d.data.same_shape(d.valid)) throw DomainError("depth/validity shape mismatch");
  if (d.kind == DepthKind::PlanarLog) throw DomainError("apply_affine works on linear-kind maps");
  DepthMap out = d;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    if (out.valid.v[i]) out.data.v[i] = scale * out.data.v[i] + shift;
  return out;
}

}  // namespace panogeo
