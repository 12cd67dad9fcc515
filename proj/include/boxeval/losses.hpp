// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

#include "boxeval/box.hpp"
#include "boxeval/metrics.hpp"

namespace boxeval {

enum class Loss {
  L1,
  L2,
  SmoothL1,
  IoULog,
  IoULinear,
  GIoU,
  DIoU,
  CIoU,
  CDIoU,
};

enum class PointwiseKind { L1, L2, SmoothL1 };

/// IoU below this is clamped before taking -log; the result carries a flag.
inline constexpr double kIoULogClamp = 1e-7;

namespace detail {

inline bool iou_family(Loss l) {
  return l == Loss::IoULog || l == Loss::IoULinear || l == Loss::GIoU ||
         l == Loss::DIoU || l == Loss::CIoU || l == Loss::CDIoU;
}

inline bool valid_cdiou_base(Loss l) {
  return iou_family(l) && l != Loss::CDIoU;
}

}  // namespace detail

/// A loss selector. `base` is only meaningful for Loss::CDIoU, where the
/// total is base loss + corner-distance ratio; the base may be any IoU-family
/// loss except CDIoU itself.
struct LossKind {
  Loss loss = Loss::IoULinear;
  Loss base = Loss::IoULinear;

  LossKind() = default;
  LossKind(Loss l) : loss(l) {}  // NOLINT: kinds are lightweight tags

  static LossKind cdiou(Loss b = Loss::IoULinear) {
    if (!detail::valid_cdiou_base(b)) {
      throw std::invalid_argument(
          "LossKind: cdiou base must be iou_log, iou_linear, giou, diou or "
          "ciou");
    }
    LossKind k;
    k.loss = Loss::CDIoU;
    k.base = b;
    return k;
  }

  friend bool operator==(const LossKind&, const LossKind&) = default;
};

/// Partial derivatives of a scalar loss with respect to the proposal's
/// corner coordinates.
struct Gradient4 {
  double dx1 = 0.0;
  double dy1 = 0.0;
  double dx2 = 0.0;
  double dy2 = 0.0;

  friend bool operator==(const Gradient4&, const Gradient4&) = default;
};

struct LossResult {
  double value = 0.0;
  /// IoULog floor was applied (fully disjoint or vanishing overlap).
  bool clamped = false;
  /// Signature of every branch taken during evaluation. Two evaluations on
  /// the same kind land in the same smooth piece iff the signatures match,
  /// which is how callers probe for nearby switching surfaces.
  std::uint64_t branches = 1;
};

struct GradientResult {
  Gradient4 grad;
  /// The configuration sits on a switching surface (tied min/max, touching
  /// edges, zero corner distance, coincident boxes); the designated
  /// one-sided subgradient was returned.
  bool nonsmooth = false;
  bool clamped = false;
};

inline double pointwise_loss(double x, PointwiseKind kind) {
  switch (kind) {
    case PointwiseKind::L1:
      return std::abs(x);
    case PointwiseKind::L2:
      return x * x;
    case PointwiseKind::SmoothL1:
      return std::abs(x) < 1.0 ? 0.5 * x * x : std::abs(x) - 0.5;
  }
  throw std::logic_error("pointwise_loss: unreachable");
}

/// Derivative of pointwise_loss. The L1 subgradient at 0 is taken as 0.
inline double pointwise_derivative(double x, PointwiseKind kind) {
  switch (kind) {
    case PointwiseKind::L1:
      return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case PointwiseKind::L2:
      return 2.0 * x;
    case PointwiseKind::SmoothL1:
      return std::abs(x) < 1.0 ? x : (x > 0.0 ? 1.0 : -1.0);
  }
  throw std::logic_error("pointwise_derivative: unreachable");
}

/// The aspect-ratio weight in the CIoU penalty at this configuration.
/// Gradients treat it as a constant, so finite-difference probes of the
/// CIoU-family losses should hold it fixed at the expansion point.
inline double ciou_aspect_weight(const Box& rp, const Box& gt) {
  const double q = std::atan2(gt.width(), gt.height()) -
                   std::atan2(rp.width(), rp.height());
  const double v = (4.0 / (std::numbers::pi * std::numbers::pi)) * q * q;
  const double denom = (1.0 - iou(rp, gt)) + v;
  return denom > 0.0 ? v / denom : 0.0;
}

namespace detail {

struct EvalResult {
  double value = 0.0;
  Gradient4 grad;
  bool clamped = false;
  bool nonsmooth = false;
  std::uint64_t branches = 1;
};

class BranchTrace {
 public:
  bool note(bool bit) {
    sig_ = sig_ * 2u + (bit ? 1u : 0u);
    return bit;
  }
  void mark_tie() { tie_ = true; }
  std::uint64_t signature() const { return sig_; }
  bool tied() const { return tie_; }

 private:
  std::uint64_t sig_ = 1;
  bool tie_ = false;
};

inline EvalResult eval_pointwise_box(const Box& rp, const Box& gt, Loss which) {
  EvalResult out;
  BranchTrace tr;
  const double residual[4] = {
      rp.center_x() - gt.center_x(),
      rp.center_y() - gt.center_y(),
      rp.width() - gt.width(),
      rp.height() - gt.height(),
  };
  double df[4] = {0.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) {
    const double r = residual[i];
    switch (which) {
      case Loss::L1:
        out.value += std::abs(r);
        df[i] = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
        tr.note(r > 0.0);
        if (r == 0.0) tr.mark_tie();
        break;
      case Loss::L2:
        out.value += r * r;
        df[i] = 2.0 * r;
        break;
      default:  // SmoothL1, C1 everywhere
        if (tr.note(std::abs(r) < 1.0)) {
          out.value += 0.5 * r * r;
          df[i] = r;
        } else {
          out.value += std::abs(r) - 0.5;
          df[i] = r > 0.0 ? 1.0 : -1.0;
        }
        break;
    }
  }
  // chain rule from (cx, cy, w, h) to corners
  out.grad.dx1 = 0.5 * df[0] - df[2];
  out.grad.dx2 = 0.5 * df[0] + df[2];
  out.grad.dy1 = 0.5 * df[1] - df[3];
  out.grad.dy2 = 0.5 * df[1] + df[3];
  out.nonsmooth = tr.tied();
  out.branches = tr.signature();
  return out;
}

/// One pass computing value and analytic gradient for any loss kind.
/// `fixed_alpha`, when non-null, overrides the CIoU aspect weight so that
/// finite differences can probe the function the gradient actually
/// differentiates.
inline EvalResult eval_impl(const Box& rp, const Box& gt, const LossKind& kind,
                            const double* fixed_alpha) {
  if (!iou_family(kind.loss)) {
    return eval_pointwise_box(rp, gt, kind.loss);
  }

  EvalResult out;
  BranchTrace tr;
  const bool is_cdiou = kind.loss == Loss::CDIoU;
  const Loss shape = is_cdiou ? kind.base : kind.loss;

  const double pw = rp.width();
  const double ph = rp.height();

  // Ownership: which box's corner forms each min/max. Ties resolve to the
  // one-sided derivative from the positive perturbation direction.
  const bool own_ix1 = rp.x1 >= gt.x1;  // rp forms max(x1)
  const bool own_iy1 = rp.y1 >= gt.y1;
  const bool own_ix2 = rp.x2 < gt.x2;  // rp forms min(x2)
  const bool own_iy2 = rp.y2 < gt.y2;
  tr.note(own_ix1);
  tr.note(own_iy1);
  tr.note(own_ix2);
  tr.note(own_iy2);
  if (rp.x1 == gt.x1 || rp.y1 == gt.y1 || rp.x2 == gt.x2 || rp.y2 == gt.y2) {
    tr.mark_tie();
  }

  const double iw = std::min(rp.x2, gt.x2) - std::max(rp.x1, gt.x1);
  const double ih = std::min(rp.y2, gt.y2) - std::max(rp.y1, gt.y1);
  const bool pos_w = tr.note(iw > 0.0);
  const bool pos_h = tr.note(ih > 0.0);
  if (iw == 0.0 || ih == 0.0) tr.mark_tie();  // exactly touching edges
  const bool overlap = pos_w && pos_h;
  const double inter = overlap ? iw * ih : 0.0;

  Gradient4 d_inter;
  if (overlap) {
    d_inter.dx1 = own_ix1 ? -ih : 0.0;
    d_inter.dx2 = own_ix2 ? ih : 0.0;
    d_inter.dy1 = own_iy1 ? -iw : 0.0;
    d_inter.dy2 = own_iy2 ? iw : 0.0;
  }

  const double u = union_area(rp, gt);
  if (u <= 0.0) {
    throw std::domain_error("loss: union of two degenerate boxes is empty");
  }
  const Gradient4 d_union{-ph - d_inter.dx1, -pw - d_inter.dy1,
                          ph - d_inter.dx2, pw - d_inter.dy2};
  const double iou_v = inter / u;
  const double inv_u2 = 1.0 / (u * u);
  const Gradient4 d_iou{(u * d_inter.dx1 - inter * d_union.dx1) * inv_u2,
                        (u * d_inter.dy1 - inter * d_union.dy1) * inv_u2,
                        (u * d_inter.dx2 - inter * d_union.dx2) * inv_u2,
                        (u * d_inter.dy2 - inter * d_union.dy2) * inv_u2};

  const bool need_enclose = is_cdiou || shape == Loss::GIoU ||
                            shape == Loss::DIoU || shape == Loss::CIoU;
  bool own_cx1 = false, own_cy1 = false, own_cx2 = false, own_cy2 = false;
  double cw = 0.0, ch = 0.0;
  if (need_enclose) {
    own_cx1 = rp.x1 < gt.x1;  // rp forms min(x1)
    own_cy1 = rp.y1 < gt.y1;
    own_cx2 = rp.x2 >= gt.x2;  // rp forms max(x2)
    own_cy2 = rp.y2 >= gt.y2;
    tr.note(own_cx1);
    tr.note(own_cy1);
    tr.note(own_cx2);
    tr.note(own_cy2);
    cw = std::max(rp.x2, gt.x2) - std::min(rp.x1, gt.x1);
    ch = std::max(rp.y2, gt.y2) - std::min(rp.y1, gt.y1);
  }

  Gradient4 g;
  switch (shape) {
    case Loss::IoULinear: {
      out.value = 1.0 - iou_v;
      g.dx1 = -d_iou.dx1;
      g.dy1 = -d_iou.dy1;
      g.dx2 = -d_iou.dx2;
      g.dy2 = -d_iou.dy2;
      break;
    }
    case Loss::IoULog: {
      const bool clamped = !tr.note(iou_v > kIoULogClamp);
      if (clamped) {
        out.value = -std::log(kIoULogClamp);
        out.clamped = true;  // flat region, zero gradient
      } else {
        out.value = -std::log(iou_v);
        const double s = -1.0 / iou_v;
        g.dx1 = s * d_iou.dx1;
        g.dy1 = s * d_iou.dy1;
        g.dx2 = s * d_iou.dx2;
        g.dy2 = s * d_iou.dy2;
      }
      break;
    }
    case Loss::GIoU: {
      const double c_area = cw * ch;
      const double giou_v = iou_v - (c_area - u) / c_area;
      out.value = 1.0 - giou_v;
      const Gradient4 d_c{own_cx1 ? -ch : 0.0, own_cy1 ? -cw : 0.0,
                          own_cx2 ? ch : 0.0, own_cy2 ? cw : 0.0};
      const double inv_c2 = 1.0 / (c_area * c_area);
      // GIoU = IoU - 1 + U/C
      g.dx1 = -(d_iou.dx1 + (c_area * d_union.dx1 - u * d_c.dx1) * inv_c2);
      g.dy1 = -(d_iou.dy1 + (c_area * d_union.dy1 - u * d_c.dy1) * inv_c2);
      g.dx2 = -(d_iou.dx2 + (c_area * d_union.dx2 - u * d_c.dx2) * inv_c2);
      g.dy2 = -(d_iou.dy2 + (c_area * d_union.dy2 - u * d_c.dy2) * inv_c2);
      break;
    }
    case Loss::DIoU:
    case Loss::CIoU: {
      const double c2 = cw * cw + ch * ch;
      const double dcx = rp.center_x() - gt.center_x();
      const double dcy = rp.center_y() - gt.center_y();
      const double rho2 = dcx * dcx + dcy * dcy;
      out.value = 1.0 - iou_v + rho2 / c2;
      const Gradient4 d_c2{own_cx1 ? -2.0 * cw : 0.0, own_cy1 ? -2.0 * ch : 0.0,
                           own_cx2 ? 2.0 * cw : 0.0, own_cy2 ? 2.0 * ch : 0.0};
      const double inv_c4 = 1.0 / (c2 * c2);
      g.dx1 = -d_iou.dx1 + (c2 * dcx - rho2 * d_c2.dx1) * inv_c4;
      g.dy1 = -d_iou.dy1 + (c2 * dcy - rho2 * d_c2.dy1) * inv_c4;
      g.dx2 = -d_iou.dx2 + (c2 * dcx - rho2 * d_c2.dx2) * inv_c4;
      g.dy2 = -d_iou.dy2 + (c2 * dcy - rho2 * d_c2.dy2) * inv_c4;
      if (shape == Loss::CIoU) {
        constexpr double four_over_pi2 =
            4.0 / (std::numbers::pi * std::numbers::pi);
        const double q = std::atan2(gt.width(), gt.height()) -
                         std::atan2(pw, ph);
        const double v = four_over_pi2 * q * q;
        double alpha;
        if (fixed_alpha != nullptr) {
          alpha = *fixed_alpha;
        } else {
          const double denom = (1.0 - iou_v) + v;
          alpha = denom > 0.0 ? v / denom : 0.0;
        }
        out.value += alpha * v;
        const double wh2 = pw * pw + ph * ph;
        if (wh2 > 0.0) {
          const double dv_dw = -2.0 * four_over_pi2 * q * (ph / wh2);
          const double dv_dh = 2.0 * four_over_pi2 * q * (pw / wh2);
          g.dx1 += alpha * -dv_dw;
          g.dx2 += alpha * dv_dw;
          g.dy1 += alpha * -dv_dh;
          g.dy2 += alpha * dv_dh;
        }
      }
      break;
    }
    default:
      throw std::logic_error("loss: unreachable base kind");
  }

  if (is_cdiou) {
    const double diag = std::hypot(cw, ch);
    if (diag <= 0.0) {
      throw std::domain_error(
          "loss: cdiou of two coincident point boxes is undefined");
    }
    // value through the same path as the evaluation metric, so that
    // loss(cdiou) - loss(base) equals diou_ratio() bit for bit
    out.value += diou_ratio(rp, gt);

    const double dx[4] = {rp.x1 - gt.x1, rp.x2 - gt.x2, rp.x1 - gt.x1,
                          rp.x2 - gt.x2};
    const double dy[4] = {rp.y1 - gt.y1, rp.y1 - gt.y1, rp.y2 - gt.y2,
                          rp.y2 - gt.y2};
    double s = 0.0;
    double ux[4], uy[4];
    for (int k = 0; k < 4; ++k) {
      const double d = std::hypot(dx[k], dy[k]);
      s += d;
      tr.note(dx[k] > 0.0);
      tr.note(dy[k] > 0.0);
      if (d == 0.0) {
        tr.mark_tie();  // sqrt kink; the corner's pull term drops out
        ux[k] = 0.0;
        uy[k] = 0.0;
      } else {
        ux[k] = dx[k] / d;
        uy[k] = dy[k] / d;
      }
    }
    const double inv_4d = 1.0 / (4.0 * diag);
    const double s_4d2 = s / (4.0 * diag * diag);
    g.dx1 += (ux[0] + ux[2]) * inv_4d - s_4d2 * (own_cx1 ? -cw / diag : 0.0);
    g.dy1 += (uy[0] + uy[1]) * inv_4d - s_4d2 * (own_cy1 ? -ch / diag : 0.0);
    g.dx2 += (ux[1] + ux[3]) * inv_4d - s_4d2 * (own_cx2 ? cw / diag : 0.0);
    g.dy2 += (uy[2] + uy[3]) * inv_4d - s_4d2 * (own_cy2 ? ch / diag : 0.0);
  }

  if (rp == gt) {
    // global minimum of every IoU-family loss; the designated subgradient
    // is the zero vector
    out.grad = Gradient4{};
    out.nonsmooth = true;
  } else {
    out.grad = g;
    out.nonsmooth = tr.tied();
  }
  out.branches = tr.signature();
  return out;
}

}  // namespace detail

inline LossResult eval_loss(const Box& rp, const Box& gt,
                            const LossKind& kind) {
  const auto e = detail::eval_impl(rp, gt, kind, nullptr);
  return LossResult{e.value, e.clamped, e.branches};
}

inline double loss(const Box& rp, const Box& gt, const LossKind& kind) {
  return detail::eval_impl(rp, gt, kind, nullptr).value;
}

inline GradientResult eval_gradient(const Box& rp, const Box& gt,
                                    const LossKind& kind) {
  const auto e = detail::eval_impl(rp, gt, kind, nullptr);
  return GradientResult{e.grad, e.nonsmooth, e.clamped};
}

inline Gradient4 gradient(const Box& rp, const Box& gt, const LossKind& kind) {
  return detail::eval_impl(rp, gt, kind, nullptr).grad;
}

/// Per-coordinate SmoothL1 over (cx, cy, w, h) residuals.
inline double smooth_l1_box_loss(const Box& rp, const Box& gt) {
  return loss(rp, gt, LossKind{Loss::SmoothL1});
}

/// Loss value with the CIoU aspect weight pinned to `alpha` instead of
/// being recomputed; identical to loss() for kinds without a CIoU term.
inline double loss_with_fixed_aspect_weight(const Box& rp, const Box& gt,
                                            const LossKind& kind,
                                            double alpha) {
  return detail::eval_impl(rp, gt, kind, &alpha).value;
}

inline std::string loss_name(const LossKind& kind) {
  switch (kind.loss) {
    case Loss::L1:
      return "l1";
    case Loss::L2:
      return "l2";
    case Loss::SmoothL1:
      return "smooth_l1";
    case Loss::IoULog:
      return "iou_log";
    case Loss::IoULinear:
      return "iou_linear";
    case Loss::GIoU:
      return "giou";
    case Loss::DIoU:
      return "diou";
    case Loss::CIoU:
      return "ciou";
    case Loss::CDIoU:
      return "cdiou_" + loss_name(LossKind{kind.base});
  }
  return "?";
}

/// Accepts the names emitted by loss_name plus bare "cdiou", which takes
/// `default_base`.
inline LossKind parse_loss(std::string_view name,
                           Loss default_base = Loss::IoULinear) {
  if (name == "l1") return LossKind{Loss::L1};
  if (name == "l2") return LossKind{Loss::L2};
  if (name == "smooth_l1") return LossKind{Loss::SmoothL1};
  if (name == "iou_log") return LossKind{Loss::IoULog};
  if (name == "iou_linear") return LossKind{Loss::IoULinear};
  if (name == "giou") return LossKind{Loss::GIoU};
  if (name == "diou") return LossKind{Loss::DIoU};
  if (name == "ciou") return LossKind{Loss::CIoU};
  if (name == "cdiou") return LossKind::cdiou(default_base);
  if (name.starts_with("cdiou_")) {
    return LossKind::cdiou(parse_loss(name.substr(6)).loss);
  }
  throw std::invalid_argument("unknown loss name: " + std::string(name));
}

}  // namespace boxeval
