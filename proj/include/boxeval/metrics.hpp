// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "boxeval/box.hpp"

namespace boxeval {

enum class Metric { IoU, GIoU, CDIoU };

/// Selects one member of the overlap-metric family. lambda only applies to
/// CDIoU and must lie in [0, 1].
struct MetricKind {
  Metric metric = Metric::IoU;
  double lambda = 0.001;

  MetricKind() = default;
  MetricKind(Metric m, double lam = 0.001) : metric(m), lambda(lam) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
      throw std::invalid_argument("MetricKind: lambda must lie in [0, 1]");
    }
  }

  friend bool operator==(const MetricKind&, const MetricKind&) = default;
};

inline double iou(const Box& rp, const Box& gt) {
  const double u = union_area(rp, gt);
  if (u <= 0.0) {
    throw std::domain_error("iou: union of two degenerate boxes is empty");
  }
  return intersection_area(rp, gt) / u;
}

inline double giou(const Box& rp, const Box& gt) {
  const double u = union_area(rp, gt);
  if (u <= 0.0) {
    throw std::domain_error("giou: union of two degenerate boxes is empty");
  }
  const double c = enclosing_box(rp, gt).area();
  return intersection_area(rp, gt) / u - (c - u) / c;
}

/// Corner-distance sum over four times the enclosing box's diagonal.
/// 0 at coincidence, approaching 1 as the boxes separate; a dissimilarity,
/// not an overlap score.
inline double diou_ratio(const Box& rp, const Box& gt) {
  const double d = diagonal(enclosing_box(rp, gt));
  if (d <= 0.0) {
    throw std::domain_error(
        "diou_ratio: enclosing box of two coincident point boxes has no "
        "diagonal");
  }
  return corner_distance_sum(rp, gt) / (4.0 * d);
}

inline double cdiou(const Box& rp, const Box& gt, double lambda = 0.001) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("cdiou: lambda must lie in [0, 1]");
  }
  return iou(rp, gt) + lambda * (1.0 - diou_ratio(rp, gt));
}

inline double metric_value(const Box& rp, const Box& gt,
                           const MetricKind& kind) {
  switch (kind.metric) {
    case Metric::IoU:
      return iou(rp, gt);
    case Metric::GIoU:
      return giou(rp, gt);
    case Metric::CDIoU:
      return cdiou(rp, gt, kind.lambda);
  }
  throw std::logic_error("metric_value: unreachable");
}

/// Indices of the proposals sorted by metric value, best first. Exact ties
/// keep their original relative order.
inline std::vector<std::size_t> rank_proposals(std::span<const Box> proposals,
                                               const Box& gt,
                                               const MetricKind& kind) {
  if (proposals.empty()) {
    throw std::domain_error("rank_proposals: empty proposal set");
  }
  std::vector<double> values(proposals.size());
  for (std::size_t i = 0; i < proposals.size(); ++i) {
    values[i] = metric_value(proposals[i], gt, kind);
  }
  std::vector<std::size_t> order(proposals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] > values[b];
                   });
  return order;
}

inline std::string metric_name(Metric m) {
  switch (m) {
    case Metric::IoU:
      return "iou";
    case Metric::GIoU:
      return "giou";
    case Metric::CDIoU:
      return "cdiou";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "iou") return Metric::IoU;
  if (name == "giou") return Metric::GIoU;
  if (name == "cdiou") return Metric::CDIoU;
  throw std::invalid_argument("unknown metric name: " + std::string(name));
}

}  // namespace boxeval
