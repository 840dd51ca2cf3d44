#pragma once

#include "depth.hpp"

namespace panogeo {

// Median pooling factor used by the metric-scale transfer when none is given.
constexpr int kDefaultAnchorFactor = 4;

struct ShiftAlignment {
  double beta = 0.0;
  long n_used = 0;
};

struct AffineAlignment {
  double scale = 1.0;
  double shift = 0.0;
  long n_used = 0;
  bool shift_only = false;  // set when pred had no variance and only shift was fit
};

// Coarse grid of cell averages. valid_fraction is the share of valid source
// pixels per cell; a cell is valid when at least one source pixel was.
struct AnchorGrid {
  int factor = 1;
  Rasterd values;
  Rasterd valid_fraction;
  Mask valid;
};

// beta* = mean(gt - pred) over jointly valid pixels: the closed-form argmin
// of sum (pred + beta - gt)^2. Both maps must be planar_log and share shape.
// Zero jointly valid pixels is a DomainError.
ShiftAlignment log_shift_beta_star(const DepthMap& pred_log, const DepthMap& gt_log);

// Cell-average pooling with ceil(extent / factor) cells; boundary cells are
// clipped. factor >= 1.
AnchorGrid pool_average(const DepthMap& d, int factor);

// Robust shift between a coarse metric log map and a pooled scale-invariant
// log map: the median of per-anchor differences (even count averages the two
// central values). coarse may come at the pooled shape or at full shape, in
// which case it is pooled with the same factor.
ShiftAlignment median_metric_scale(const DepthMap& coarse_log, const DepthMap& si_log, int factor);

// Z_m = exp(beta) * Z_si: adds beta to log maps, scales linear kinds.
DepthMap apply_metric_scale(const DepthMap& si, double beta);

// Least-squares (scale, shift) minimizing sum (s * pred + t - gt)^2 via the
// 2x2 normal equations, on linear-kind maps. Constant pred degenerates to a
// flagged shift-only fit.
AffineAlignment lstsq_scale_shift(const DepthMap& pred, const DepthMap& gt);

// scale * d + shift at valid pixels, linear kinds only.
DepthMap apply_affine(const DepthMap& d, double scale, double shift);

}  // namespace panogeo
