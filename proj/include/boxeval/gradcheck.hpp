// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "boxeval/box.hpp"
#include "boxeval/losses.hpp"
#include "boxeval/metrics.hpp"

namespace boxeval {

/// One coordinate of an analytic-vs-numeric comparison.
struct GradientCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
};

/// Summary of a finite-difference sweep over one loss kind.
struct GradCheckReport {
  LossKind kind;
  double h = 1e-5;
  double rel_tolerance = 1e-4;
  double abs_floor = 1e-7;
  std::size_t pairs_checked = 0;
  std::size_t pairs_rejected = 0;
  double max_rel_error = 0.0;
  double mean_rel_error = 0.0;
  Box worst_rp;
  Box worst_gt;
  std::array<GradientCheck, 4> worst{};
  bool pass = false;
};

namespace detail {

inline bool has_ciou_term(const LossKind& kind) {
  return kind.loss == Loss::CIoU ||
         (kind.loss == Loss::CDIoU && kind.base == Loss::CIoU);
}

inline bool has_log_term(const LossKind& kind) {
  return kind.loss == Loss::IoULog ||
         (kind.loss == Loss::CDIoU && kind.base == Loss::IoULog);
}

constexpr const char* kCoordNames[4] = {"x1", "y1", "x2", "y2"};

}  // namespace detail

/// Central differences of the loss with respect to each proposal corner.
/// Canonicalization is disabled: a perturbation that breaks x1 < x2 or
/// y1 < y2 is rejected with a domain error naming the coordinate. Kinds with
/// a CIoU term are probed with the aspect weight frozen at the expansion
/// point, the same constant the analytic gradient uses.
inline Gradient4 finite_diff_gradient(const LossKind& kind, const Box& rp,
                                      const Box& gt, double h) {
  if (!(h > 0.0)) {
    throw std::domain_error("finite_diff_gradient: step must be positive");
  }
  const bool freeze = detail::has_ciou_term(kind);
  const double alpha = freeze ? ciou_aspect_weight(rp, gt) : 0.0;

  const auto value_at = [&](const Box& b) {
    return freeze ? loss_with_fixed_aspect_weight(b, gt, kind, alpha)
                  : loss(b, gt, kind);
  };

  const double base[4] = {rp.x1, rp.y1, rp.x2, rp.y2};
  Gradient4 g;
  double* out[4] = {&g.dx1, &g.dy1, &g.dx2, &g.dy2};
  for (int i = 0; i < 4; ++i) {
    double plus[4] = {base[0], base[1], base[2], base[3]};
    double minus[4] = {base[0], base[1], base[2], base[3]};
    plus[i] += h;
    minus[i] -= h;
    const bool ok = plus[0] < plus[2] && plus[1] < plus[3] &&
                    minus[0] < minus[2] && minus[1] < minus[3];
    if (!ok) {
      throw std::domain_error(
          std::string("finite_diff_gradient: perturbing ") +
          detail::kCoordNames[i] + " by the step makes the box invalid");
    }
    const Box bp = Box::strict(plus[0], plus[1], plus[2], plus[3]);
    const Box bm = Box::strict(minus[0], minus[1], minus[2], minus[3]);
    *out[i] = (value_at(bp) - value_at(bm)) / (2.0 * h);
  }
  return g;
}

namespace detail {

inline Box random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  std::uniform_real_distribution<double> logsize(std::log(0.4), std::log(2.5));
  const double x1 = pos(rng);
  const double y1 = pos(rng);
  const double w = std::exp(logsize(rng));
  const double h = std::exp(logsize(rng));
  return Box::strict(x1, y1, x1 + w, y1 + h);
}

inline Box jittered_box(std::mt19937_64& rng, const Box& gt, double spread) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> logscale(std::log(0.5),
                                                  std::log(2.0));
  const double cx = gt.center_x() + unit(rng) * spread * gt.width();
  const double cy = gt.center_y() + unit(rng) * spread * gt.height();
  const double w = gt.width() * std::exp(logscale(rng));
  const double h = gt.height() * std::exp(logscale(rng));
  return Box::strict(cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h);
}

inline double min_corner_distance(const Box& a, const Box& b) {
  return std::min(std::min(std::hypot(a.x1 - b.x1, a.y1 - b.y1),
                           std::hypot(a.x2 - b.x2, a.y1 - b.y1)),
                  std::min(std::hypot(a.x1 - b.x1, a.y2 - b.y2),
                           std::hypot(a.x2 - b.x2, a.y2 - b.y2)));
}

/// Keeps the sweep at least `guard` away from any switching surface, probing
/// the branch signature of the loss at +/- guard per coordinate rather than
/// enumerating the surfaces analytically.
inline bool smooth_neighborhood(const Box& rp, const Box& gt,
                                const LossKind& kind, double guard) {
  if (eval_gradient(rp, gt, kind).nonsmooth) return false;
  if (has_log_term(kind) && iou(rp, gt) < 0.02) return false;
  if (kind.loss == Loss::CDIoU && min_corner_distance(rp, gt) < 5e-3) {
    // the corner pull term is smooth here but too curved for h^2 accuracy
    return false;
  }
  const auto e0 = eval_loss(rp, gt, kind);
  const double base[4] = {rp.x1, rp.y1, rp.x2, rp.y2};
  for (int i = 0; i < 4; ++i) {
    for (const double sign : {1.0, -1.0}) {
      double c[4] = {base[0], base[1], base[2], base[3]};
      c[i] += sign * guard;
      if (!(c[0] < c[2] && c[1] < c[3])) return false;
      const auto e = eval_loss(Box::strict(c[0], c[1], c[2], c[3]), gt, kind);
      if (e.branches != e0.branches || e.clamped != e0.clamped) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Every loss kind with a box-level gradient, CDIoU once per base.
inline std::vector<LossKind> all_loss_kinds() {
  std::vector<LossKind> kinds{
      LossKind{Loss::L1},     LossKind{Loss::L2},   LossKind{Loss::SmoothL1},
      LossKind{Loss::IoULog}, LossKind{Loss::IoULinear},
      LossKind{Loss::GIoU},   LossKind{Loss::DIoU}, LossKind{Loss::CIoU},
  };
  for (const Loss b :
       {Loss::IoULog, Loss::IoULinear, Loss::GIoU, Loss::DIoU, Loss::CIoU}) {
    kinds.push_back(LossKind::cdiou(b));
  }
  return kinds;
}

/// Compares analytic gradients against central differences on seeded random
/// pairs sampled away from switching surfaces. Deterministic given the seed.
inline std::vector<GradCheckReport> sweep(std::span<const LossKind> kinds,
                                          std::size_t n_pairs,
                                          std::uint64_t seed, double h = 1e-5,
                                          double rel_tolerance = 1e-4,
                                          double abs_floor = 1e-7) {
  if (n_pairs == 0) {
    throw std::domain_error("sweep: n_pairs must be at least 1");
  }
  constexpr double kGuard = 1e-3;

  std::vector<GradCheckReport> reports;
  reports.reserve(kinds.size());
  for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
    const LossKind kind = kinds[ki];
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * (ki + 1));
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    GradCheckReport rep;
    rep.kind = kind;
    rep.h = h;
    rep.rel_tolerance = rel_tolerance;
    rep.abs_floor = abs_floor;

    double rel_sum = 0.0;
    std::size_t attempts = 0;
    while (rep.pairs_checked < n_pairs) {
      if (++attempts > 500 * n_pairs + 10000) {
        throw std::runtime_error("sweep: rejection sampling stalled");
      }
      const Box gt = detail::random_box(rng);
      const bool near = detail::has_log_term(kind) || coin(rng) < 0.7;
      const Box rp = near ? detail::jittered_box(rng, gt, 0.45)
                          : detail::random_box(rng);
      if (!detail::smooth_neighborhood(rp, gt, kind, kGuard)) {
        ++rep.pairs_rejected;
        continue;
      }

      const Gradient4 a = gradient(rp, gt, kind);
      const Gradient4 n = finite_diff_gradient(kind, rp, gt, h);
      const double av[4] = {a.dx1, a.dy1, a.dx2, a.dy2};
      const double nv[4] = {n.dx1, n.dy1, n.dx2, n.dy2};
      std::array<GradientCheck, 4> checks;
      double pair_rel = 0.0;
      for (int i = 0; i < 4; ++i) {
        GradientCheck& c = checks[i];
        c.analytic = av[i];
        c.numeric = nv[i];
        c.abs_error = std::abs(av[i] - nv[i]);
        c.rel_error = c.abs_error / std::max({std::abs(av[i]),
                                              std::abs(nv[i]), abs_floor});
        if (!std::isfinite(av[i]) || !std::isfinite(nv[i])) {
          c.rel_error = std::numeric_limits<double>::infinity();
        }
        pair_rel = std::max(pair_rel, c.rel_error);
      }
      if (pair_rel >= rep.max_rel_error) {
        rep.max_rel_error = pair_rel;
        rep.worst_rp = rp;
        rep.worst_gt = gt;
        rep.worst = checks;
      }
      rel_sum += pair_rel;
      ++rep.pairs_checked;
    }
    rep.mean_rel_error = rel_sum / static_cast<double>(n_pairs);
    rep.pass = rep.max_rel_error <= rel_tolerance;
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace boxeval
