#pragma once

#include <functional>

#include "depth.hpp"
#include "raster.hpp"

namespace panogeo {

// Training-time weighting; lambda_perc belongs to the perceptual term, which
// lives outside this library and is carried only so configs round-trip.
struct LossWeights {
  double lambda_l1 = 1.0;
  double lambda_c = 0.2;
  double lambda_grad = 40.0;
  double lambda_norm = 0.6;
  double lambda_cos = 1.0;
  double lambda_perc = 0.5;
  double lambda_bce = 1.0;
  double lambda_focal = 0.4;
  double lambda_dice = 1.0;
  double focal_gamma = 2.0;
};

// mean over valid pixels of c |pred - gt| - lambda_c log c. Confidence must
// be positive at valid pixels. Zero valid pixels is a DomainError; that holds
// for every masked loss below.
double confidence_l1(const Rasterd& pred, const Rasterd& gt, const Rasterd& conf, double lambda_c,
                     const Mask& valid);
void confidence_l1_grad(const Rasterd& pred, const Rasterd& gt, const Rasterd& conf,
                        double lambda_c, const Mask& valid, Rasterd* d_pred, Rasterd* d_conf);

// mean over valid pixels of the summed |forward-difference mismatch| in x and
// y; a difference contributes only when both its pixels are valid.
double gradient_loss(const Rasterd& pred, const Rasterd& gt, const Mask& valid);
void gradient_loss_grad(const Rasterd& pred, const Rasterd& gt, const Mask& valid, Rasterd* d_pred);

// mean over valid pixels of 1 - dot(pred, gt). Inputs must be unit within
// 1e-3 at valid pixels and are not renormalized, keeping the loss linear in
// pred.
double cosine_loss(const RasterV3& pred, const RasterV3& gt, const Mask& valid);
void cosine_loss_grad(const RasterV3& pred, const RasterV3& gt, const Mask& valid,
                      RasterV3* d_pred);

// 1 - dot(n_hat, gt) averaged where both are valid, with n_hat derived from
// the predicted depth via depth_to_normals.
double normal_consistency_loss(const DepthMap& pred_linear, const NormalMap& gt_normals);

struct DepthLossBreakdown {
  double total = 0, l1 = 0, grad = 0, norm = 0;
};

// lambda_l1 * L1 + lambda_grad * Lgrad + lambda_norm * Lnorm on planar_log
// maps. The normal term unprojects pred, so it needs a face frame; it is
// skipped (reported 0) when lambda_norm is 0.
DepthLossBreakdown depth_composite_loss(const DepthMap& pred_log, const DepthMap& gt_log,
                                        const Rasterd& conf, const NormalMap& gt_normals,
                                        const LossWeights& w);

// Binary targets must be exactly 0 or 1; probabilities live in [0, 1] and are
// clamped to [1e-7, 1 - 1e-7] inside the logs.
double bce_loss(const Rasterd& prob, const Rasterd& target);
void bce_loss_grad(const Rasterd& prob, const Rasterd& target, Rasterd* d_prob);

// -(1 - p_t)^gamma log p_t averaged; gamma = 0 reduces exactly to bce_loss.
double focal_loss(const Rasterd& prob, const Rasterd& target, double gamma);
void focal_loss_grad(const Rasterd& prob, const Rasterd& target, double gamma, Rasterd* d_prob);

// 1 - (2 sum(p t) + eps) / (sum p + sum t + eps) with eps = 1.
double dice_loss(const Rasterd& prob, const Rasterd& target);
void dice_loss_grad(const Rasterd& prob, const Rasterd& target, Rasterd* d_prob);

// Central finite differences of f at x, step h per element. Non-finite f
// values raise DomainError.
Rasterd numerical_gradient(const std::function<double(const Rasterd&)>& f, const Rasterd& x,
                           double h);

}  // namespace panogeo
