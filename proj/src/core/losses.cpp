#include "losses.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace panogeo {

namespace {

constexpr double kProbEps = 1e-7;

double sgn(double x) { return x > 0.0 ? 1.0 : x < 0.0 ? -1.0 : 0.0; }

long check_masked(const Rasterd& pred, const Rasterd& gt, const Mask& valid) {
  if (pred.empty()) throw DomainError("empty raster");
  if (!pred.same_shape(gt) || !pred.same_shape(valid)) throw DomainError("shape mismatch");
  long n = count_valid(valid);
  if (n == 0) throw DomainError("no valid pixels");
  return n;
}

void check_prob_pair(const Rasterd& prob, const Rasterd& target) {
  if (prob.empty()) throw DomainError("empty raster");
  if (!prob.same_shape(target)) throw DomainError("shape mismatch");
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double p = prob.v[i], t = target.v[i];
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability outside [0, 1]");
    if (t != 0.0 && t != 1.0) throw DomainError("target must be binary");
  }
}

double clamp_prob(double p) { return std::clamp(p, kProbEps, 1.0 - kProbEps); }

}  // namespace

double confidence_l1(const Rasterd& pred, const Rasterd& gt, const Rasterd& conf, double lambda_c,
                     const Mask& valid) {
  long n = check_masked(pred, gt, valid);
  if (!pred.same_shape(conf)) throw DomainError("shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid.v[i]) continue;
    double c = conf.v[i];
    if (!(c > 0.0)) throw DomainError("confidence must be positive at valid pixels");
    sum += c * std::abs(pred.v[i] - gt.v[i]) - lambda_c * std::log(c);
  }
  return sum / n;
}

void confidence_l1_grad(const Rasterd& pred, const Rasterd& gt, const Rasterd& conf,
                        double lambda_c, const Mask& valid, Rasterd* d_pred, Rasterd* d_conf) {
  long n = check_masked(pred, gt, valid);
  if (!pred.same_shape(conf)) throw DomainError("shape mismatch");
  if (d_pred) *d_pred = Rasterd(pred.width, pred.height);
  if (d_conf) *d_conf = Rasterd(pred.width, pred.height);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid.v[i]) continue;
    double c = conf.v[i];
    if (!(c > 0.0)) throw DomainError("confidence must be positive at valid pixels");
    double diff = pred.v[i] - gt.v[i];
    if (d_pred) d_pred->v[i] = c * sgn(diff) / n;
    if (d_conf) d_conf->v[i] = (std::abs(diff) - lambda_c / c) / n;
  }
}

double gradient_loss(const Rasterd& pred, const Rasterd& gt, const Mask& valid) {
  long n = check_masked(pred, gt, valid);
  double sum = 0.0;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      if (!valid.at(x, y)) continue;
      if (x + 1 < pred.width && valid.at(x + 1, y))
        sum += std::abs((pred.at(x + 1, y) - pred.at(x, y)) - (gt.at(x + 1, y) - gt.at(x, y)));
      if (y + 1 < pred.height && valid.at(x, y + 1))
        sum += std::abs((pred.at(x, y + 1) - pred.at(x, y)) - (gt.at(x, y + 1) - gt.at(x, y)));
    }
  }
  return sum / n;
}

void gradient_loss_grad(const Rasterd& pred, const Rasterd& gt, const Mask& valid,
                        Rasterd* d_pred) {
  long n = check_masked(pred, gt, valid);
  *d_pred = Rasterd(pred.width, pred.height);
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      if (!valid.at(x, y)) continue;
      if (x + 1 < pred.width && valid.at(x + 1, y)) {
        double s =
            sgn((pred.at(x + 1, y) - pred.at(x, y)) - (gt.at(x + 1, y) - gt.at(x, y))) / n;
        d_pred->at(x + 1, y) += s;
        d_pred->at(x, y) -= s;
      }
      if (y + 1 < pred.height && valid.at(x, y + 1)) {
        double s =
            sgn((pred.at(x, y + 1) - pred.at(x, y)) - (gt.at(x, y + 1) - gt.at(x, y))) / n;
        d_pred->at(x, y + 1) += s;
        d_pred->at(x, y) -= s;
      }
    }
  }
}

double cosine_loss(const RasterV3& pred, const RasterV3& gt, const Mask& valid) {
  if (pred.empty()) throw DomainError("empty raster");
  if (!pred.same_shape(gt) || !pred.same_shape(valid)) throw DomainError("shape mismatch");
  long n = count_valid(valid);
  if (n == 0) throw DomainError("no valid pixels");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!valid.v[i]) continue;
    if (std::abs(norm(pred.v[i]) - 1.0) > 1e-3 || std::abs(norm(gt.v[i]) - 1.0) > 1e-3)
      throw DomainError("cosine_loss inputs must be unit vectors");
    sum += 1.0 - dot(pred.v[i], gt.v[i]);
  }
  return sum / n;
}

void cosine_loss_grad(const RasterV3& pred, const RasterV3& gt, const Mask& valid,
                      RasterV3* d_pred) {
  if (pred.empty()) throw DomainError("empty raster");
  if (!pred.same_shape(gt) || !pred.same_shape(valid)) throw DomainError("shape mismatch");
  long n = count_valid(valid);
  if (n == 0) throw DomainError("no valid pixels");
  *d_pred = RasterV3(pred.width, pred.height);
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (valid.v[i]) d_pred->v[i] = (-1.0 / n) * gt.v[i];
}

double normal_consistency_loss(const DepthMap& pred_linear, const NormalMap& gt_normals) {
  NormalMap nm = depth_to_normals(pred_linear);
  if (!nm.data.same_shape(gt_normals.data) || !gt_normals.data.same_shape(gt_normals.valid))
    throw DomainError("normal map shape mismatch");
  double sum = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < nm.data.size(); ++i) {
    if (!nm.valid.v[i] || !gt_normals.valid.v[i]) continue;
    sum += 1.0 - dot(nm.data.v[i], gt_normals.data.v[i]);
    ++n;
  }
  if (n == 0) throw DomainError("no valid pixels");
  return sum / n;
}

DepthLossBreakdown depth_composite_loss(const DepthMap& pred_log, const DepthMap& gt_log,
                                        const Rasterd& conf, const NormalMap& gt_normals,
                                        const LossWeights& w) {
  if (pred_log.kind != DepthKind::PlanarLog || gt_log.kind != DepthKind::PlanarLog)
    throw DomainError("depth_composite_loss requires planar_log maps");
  if (!pred_log.data.same_shape(gt_log.data)) throw DomainError("depth map shapes differ");
  Mask joint(pred_log.valid.width, pred_log.valid.height, 0);
  for (std::size_t i = 0; i < joint.size(); ++i)
    joint.v[i] = pred_log.valid.v[i] && gt_log.valid.v[i];

  DepthLossBreakdown out;
  out.l1 = confidence_l1(pred_log.data, gt_log.data, conf, w.lambda_c, joint);
  out.grad = gradient_loss(pred_log.data, gt_log.data, joint);
  if (w.lambda_norm != 0.0)
    out.norm = normal_consistency_loss(convert_depth(pred_log, DepthKind::PlanarLinear),
                                       gt_normals);
  out.total = w.lambda_l1 * out.l1 + w.lambda_grad * out.grad + w.lambda_norm * out.norm;
  return out;
}

double bce_loss(const Rasterd& prob, const Rasterd& target) {
  check_prob_pair(prob, target);
  double sum = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double q = clamp_prob(prob.v[i]);
    sum -= target.v[i] * std::log(q) + (1.0 - target.v[i]) * std::log(1.0 - q);
  }
  return sum / static_cast<double>(prob.size());
}

void bce_loss_grad(const Rasterd& prob, const Rasterd& target, Rasterd* d_prob) {
  check_prob_pair(prob, target);
  *d_prob = Rasterd(prob.width, prob.height);
  double n = static_cast<double>(prob.size());
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double p = prob.v[i];
    if (p <= kProbEps || p >= 1.0 - kProbEps) continue;  // clamped region is flat
    d_prob->v[i] = (-target.v[i] / p + (1.0 - target.v[i]) / (1.0 - p)) / n;
  }
}

double focal_loss(const Rasterd& prob, const Rasterd& target, double gamma) {
  check_prob_pair(prob, target);
  if (!(gamma >= 0.0)) throw DomainError("focal gamma must be >= 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double q = clamp_prob(prob.v[i]);
    double pt = target.v[i] > 0.5 ? q : 1.0 - q;
    sum -= std::pow(1.0 - pt, gamma) * std::log(pt);
  }
  return sum / static_cast<double>(prob.size());
}

void focal_loss_grad(const Rasterd& prob, const Rasterd& target, double gamma, Rasterd* d_prob) {
  check_prob_pair(prob, target);
  if (!(gamma >= 0.0)) throw DomainError("focal gamma must be >= 0");
  *d_prob = Rasterd(prob.width, prob.height);
  double n = static_cast<double>(prob.size());
  for (std::size_t i = 0; i < prob.size(); ++i) {
    double p = prob.v[i];
    if (p <= kProbEps || p >= 1.0 - kProbEps) continue;
    double t = target.v[i];
    double pt = t > 0.5 ? p : 1.0 - p;
    double dpt = gamma > 0.0 ? gamma * std::pow(1.0 - pt, gamma - 1.0) * std::log(pt) : 0.0;
    dpt -= std::pow(1.0 - pt, gamma) / pt;
    d_prob->v[i] = dpt * (t > 0.5 ? 1.0 : -1.0) / n;
  }
}

double dice_loss(const Rasterd& prob, const Rasterd& target) {
  check_prob_pair(prob, target);
  double inter = 0.0, sp = 0.0, st = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    inter += prob.v[i] * target.v[i];
    sp += prob.v[i];
    st += target.v[i];
  }
  return 1.0 - (2.0 * inter + 1.0) / (sp + st + 1.0);
}

void dice_loss_grad(const Rasterd& prob, const Rasterd& target, Rasterd* d_prob) {
  check_prob_pair(prob, target);
  *d_prob = Rasterd(prob.width, prob.height);
  double inter = 0.0, sp = 0.0, st = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    inter += prob.v[i] * target.v[i];
    sp += prob.v[i];
    st += target.v[i];
  }
  double denom = sp + st + 1.0;
  double num = 2.0 * inter + 1.0;
  for (std::size_t i = 0; i < prob.size(); ++i)
    d_prob->v[i] = -(2.0 * target.v[i] * denom - num) / (denom * denom);
}

Rasterd numerical_gradient(const std::function<double(const Rasterd&)>& f, const Rasterd& x,
                           double h) {
  if (x.empty()) throw DomainError("empty raster");
  if (!(h > 0.0)) throw DomainError("step must be positive");
  Rasterd g(x.width, x.height);
  Rasterd probe = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double x0 = x.v[i];
    probe.v[i] = x0 + h;
    double fp = f(probe);
    probe.v[i] = x0 - h;
    double fm = f(probe);
    probe.v[i] = x0;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw DomainError("non-finite loss in numerical gradient");
    g.v[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace panogeo
