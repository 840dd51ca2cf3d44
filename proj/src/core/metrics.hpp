#pragma once

#include "depth.hpp"

namespace panogeo {

// Evaluation defaults: depth range mask and seam thresholds.
constexpr double kDefaultRangeLo = 0.0;
constexpr double kDefaultRangeHi = 75.0;
constexpr double kDefaultSeamTau = 0.05;
constexpr double kDefaultSeamGamma = 0.10;

struct DepthMetrics {
  double abs_rel = 0, rmse = 0, delta1 = 0;
  long n_used = 0;
};

// AbsRel, RMSE and the delta < 1.25 accuracy over pixels that are jointly
// valid with gt inside [lo, hi]. Fractions are reported as fractions; any
// percent scaling is presentation. gt must be positive where evaluated (a
// nonpositive gt pixel is excluded like an invalid one); nonpositive pred
// simply fails the delta test. Same linear kind on both maps.
DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt, double lo, double hi);

struct NormalMetrics {
  double mean_deg = 0, mse_deg2 = 0;
  double frac_below_5 = 0, frac_below_22_5 = 0;  // strict thresholds
  long n_used = 0;
};

// Angular error statistics between two normal maps in the same frame; inputs
// are renormalized defensively (a zero vector at a valid pixel is a
// DomainError).
NormalMetrics normal_metrics(const NormalMap& pred, const NormalMap& gt);

struct SeamMetrics {
  double sdd = 0;  // defective pair fraction over all 12 edges
  double sp = 0;   // fraction of edges with > 10% defective pairs
  double ss = 0;   // fraction of edges whose mean log gap exceeds gamma
  long pairs = 0;
  long defects = 0;
};

// Boundary-pair discrepancies |log d_p - log d_q| over the 12 undirected cube
// edges of a euclidean depth cubemap. A pair is defective when its gap
// strictly exceeds tau; pairs with an invalid or nonpositive endpoint are
// excluded. sp and ss are exact multiples of 1/12.
SeamMetrics seam_metrics(const DepthCubemap& cm, double tau, double gamma);

}  // namespace panogeo
