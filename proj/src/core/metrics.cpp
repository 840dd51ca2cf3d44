#include "metrics.hpp"

#include <cmath>

#include "error.hpp"

namespace panogeo {

namespace {
constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
}

DepthMetrics depth_metrics(const DepthMap& pred, const DepthMap& gt, double lo, double hi) {
  if (pred.data.empty()) throw DomainError("empty depth map");
  if (!pred.data.same_shape(pred.valid) || !gt.data.same_shape(gt.valid) ||
      !pred.data.same_shape(gt.data))
    throw DomainError("shape mismatch");
  if (pred.kind == DepthKind::PlanarLog || gt.kind == DepthKind::PlanarLog)
    throw DomainError("depth_metrics works on linear-kind maps");
  if (pred.kind != gt.kind) throw DomainError("depth kinds differ");
  if (!(lo <= hi)) throw DomainError("bad range");

  double abs_rel = 0, sq = 0;
  long n = 0, acc = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.valid.v[i] || !gt.valid.v[i]) continue;
    double g = gt.data.v[i];
    if (!(g > 0.0) || g < lo || g > hi) continue;
    double p = pred.data.v[i];
    abs_rel += std::abs(p - g) / g;
    sq += (p - g) * (p - g);
    if (p > 0.0 && std::max(p / g, g / p) < 1.25) ++acc;
    ++n;
  }
  if (n == 0) throw DomainError("no pixels left to evaluate");
  return {abs_rel / n, std::sqrt(sq / n), static_cast<double>(acc) / n, n};
}

NormalMetrics normal_metrics(const NormalMap& pred, const NormalMap& gt) {
  if (pred.data.empty()) throw DomainError("empty normal map");
  if (!pred.data.same_shape(pred.valid) || !gt.data.same_shape(gt.valid) ||
      !pred.data.same_shape(gt.data))
    throw DomainError("shape mismatch");
  if (pred.frame != gt.frame) throw DomainError("normal map frames differ");

  double sum = 0, sumsq = 0;
  long n = 0, n5 = 0, n225 = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (!pred.valid.v[i] || !gt.valid.v[i]) continue;
    double np = norm(pred.data.v[i]), ng = norm(gt.data.v[i]);
    if (!(np > 1e-12) || !(ng > 1e-12))
      throw DomainError("zero normal at a valid pixel");
    double c = dot(pred.data.v[i], gt.data.v[i]) / (np * ng);
    double deg = std::acos(std::clamp(c, -1.0, 1.0)) * kRadToDeg;
    sum += deg;
    sumsq += deg * deg;
    if (deg < 5.0) ++n5;
    if (deg < 22.5) ++n225;
    ++n;
  }
  if (n == 0) throw DomainError("no pixels left to evaluate");
  return {sum / n, sumsq / n, static_cast<double>(n5) / n, static_cast<double>(n225) / n, n};
}

SeamMetrics seam_metrics(const DepthCubemap& cm, double tau, double gamma) {
  const int side = cm.side();
  for (const auto& f : cm.faces) {
    if (f.data.empty() || f.data.width != side || f.data.height != side)
      throw DomainError("cubemap faces must share one square shape");
    if (!f.data.same_shape(f.valid)) throw DomainError("depth/validity shape mismatch");
    if (f.kind != DepthKind::Euclidean) throw DomainError("seam_metrics requires euclidean faces");
  }
  if (!(tau > 0.0) || !(gamma > 0.0)) throw DomainError("tau and gamma must be positive");

  const auto& adj = cube_adjacency();
  SeamMetrics out;
  int prevalent = 0, severe = 0, edges = 0;
  for (int fi = 0; fi < kFaceCount; ++fi) {
    for (int ei = 0; ei < 4; ++ei) {
      const EdgeLink& l = adj.link[fi][ei];
      // visit each undirected edge from its lower (face, edge) key
      if (static_cast<int>(l.nbr_face) * 4 + static_cast<int>(l.nbr_edge) < fi * 4 + ei) continue;
      ++edges;
      const DepthMap& a = cm.faces[fi];
      const DepthMap& b = cm.faces[static_cast<int>(l.nbr_face)];
      long n = 0, defects = 0;
      double sum = 0;
      for (int i = 0; i < side; ++i) {
        Pixel p = border_pixel(static_cast<EdgeId>(ei), i, 0, side);
        Pixel q = border_pixel(l.nbr_edge, l.reversed ? side - 1 - i : i, 0, side);
        if (!a.valid.at(p.x, p.y) || !b.valid.at(q.x, q.y)) continue;
        double dp = a.data.at(p.x, p.y), dq = b.data.at(q.x, q.y);
        if (!(dp > 0.0) || !(dq > 0.0)) continue;
        double gap = std::abs(std::log(dp) - std::log(dq));
        sum += gap;
        if (gap > tau) ++defects;
        ++n;
      }
      out.pairs += n;
      out.defects += defects;
      if (n > 0 && static_cast<double>(defects) / n > 0.1) ++prevalent;
      if (n > 0 && sum / n > gamma) ++severe;
    }
  }
  if (edges != 12) throw DomainError("adjacency did not yield 12 edges");
  if (out.pairs == 0) throw DomainError("no valid boundary pairs");
  out.sdd = static_cast<double>(out.defects) / out.pairs;
  out.sp = prevalent / 12.0;
  out.ss = severe / 12.0;
  return out;
}

}  // namespace panogeo
