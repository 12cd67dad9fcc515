// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxeval/annotations.hpp"

namespace boxeval {

enum class ClusterMethod { KMeans, Agglomerative, Dbscan, MeanShift };
enum class SizeDistance { Euclidean, OneMinusIoU };

struct ClusterParams {
  std::size_t k = 3;                // kmeans / agglomerative
  SizeDistance distance = SizeDistance::Euclidean;  // kmeans only
  double eps = 0.0;                 // dbscan; <= 0 derives it from the data
  std::size_t min_pts = 4;          // dbscan
  double bandwidth = 0.0;           // meanshift; <= 0 derives it
  std::uint64_t seed = 0;
  std::size_t max_iterations = 200;
};

struct ValidityIndices {
  double sse = 0.0;
  std::optional<double> silhouette;
  std::optional<double> calinski_harabasz;
};

/// One clustering of the (w, h) points. Centers are sorted
/// lexicographically; assignment follows the input point order with -1 for
/// density-method noise.
struct ClusterScheme {
  std::string method;
  std::size_t k = 0;
  std::vector<SizePoint> centers;
  std::vector<double> anchor_sizes;   // sqrt(w * h) per center
  std::vector<double> aspect_ratios;  // w / h per center
  ValidityIndices indices;
  std::vector<int> assignment;
  std::size_t noise_count = 0;
  std::vector<double> sse_trace;  // kmeans: SSE after each Lloyd iteration
};

inline double euclidean_distance(const SizePoint& a, const SizePoint& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

/// 1 - IoU of two concentric boxes with these sizes; zero iff the sizes are
/// identical, symmetric, and always below 1.
inline double one_minus_iou_distance(const SizePoint& a, const SizePoint& b) {
  const double inter = std::min(a[0], b[0]) * std::min(a[1], b[1]);
  const double uni = a[0] * a[1] + b[0] * b[1] - inter;
  return 1.0 - inter / uni;
}

/// SSE, mean silhouette and Calinski-Harabasz for an assignment. Noise
/// points (label < 0) are excluded. Silhouette and CH need at least two
/// clusters and more points than clusters; otherwise they are left unset.
inline ValidityIndices internal_indices(std::span<const SizePoint> points,
                                        std::span<const int> assignment) {
  if (points.size() != assignment.size()) {
    throw std::invalid_argument(
        "internal_indices: points and assignment differ in length");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (assignment[i] >= 0) kept.push_back(i);
  }
  if (kept.empty()) {
    throw std::domain_error("internal_indices: no clustered points");
  }

  std::map<int, int> compact;
  for (const std::size_t i : kept) compact.emplace(assignment[i], 0);
  int next = 0;
  for (auto& [label, id] : compact) id = next++;
  const std::size_t k = compact.size();
  const std::size_t n = kept.size();

  std::vector<SizePoint> centroid(k, {0.0, 0.0});
  std::vector<std::size_t> count(k, 0);
  for (const std::size_t i : kept) {
    const int c = compact.at(assignment[i]);
    centroid[c][0] += points[i][0];
    centroid[c][1] += points[i][1];
    ++count[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    centroid[c][0] /= static_cast<double>(count[c]);
    centroid[c][1] /= static_cast<double>(count[c]);
  }

  ValidityIndices out;
  for (const std::size_t i : kept) {
    const int c = compact.at(assignment[i]);
    const double dw = points[i][0] - centroid[c][0];
    const double dh = points[i][1] - centroid[c][1];
    out.sse += dw * dw + dh * dh;
  }

  if (k < 2 || n <= k) return out;

  // silhouette, straight from the definition
  double sil_sum = 0.0;
  std::vector<double> to_cluster(k);
  for (const std::size_t i : kept) {
    const int ci = compact.at(assignment[i]);
    std::fill(to_cluster.begin(), to_cluster.end(), 0.0);
    for (const std::size_t j : kept) {
      if (j == i) continue;
      to_cluster[compact.at(assignment[j])] +=
          euclidean_distance(points[i], points[j]);
    }
    if (count[ci] <= 1) continue;  // singleton: contributes 0
    const double a = to_cluster[ci] / static_cast<double>(count[ci] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == ci) continue;
      b = std::min(b, to_cluster[c] / static_cast<double>(count[c]));
    }
    const double m = std::max(a, b);
    sil_sum += m > 0.0 ? (b - a) / m : 0.0;
  }
  out.silhouette = sil_sum / static_cast<double>(n);

  SizePoint overall{0.0, 0.0};
  for (const std::size_t i : kept) {
    overall[0] += points[i][0];
    overall[1] += points[i][1];
  }
  overall[0] /= static_cast<double>(n);
  overall[1] /= static_cast<double>(n);
  double between = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double dw = centroid[c][0] - overall[0];
    const double dh = centroid[c][1] - overall[1];
    between += static_cast<double>(count[c]) * (dw * dw + dh * dh);
  }
  const double within = out.sse;
  out.calinski_harabasz =
      within > 0.0
          ? (between / static_cast<double>(k - 1)) /
                (within / static_cast<double>(n - k))
          : std::numeric_limits<double>::infinity();
  return out;
}

namespace detail {

/// Points sorted lexicographically, so every method is independent of the
/// input order; `orig[i]` maps a sorted slot back to the caller's index.
struct SortedPoints {
  std::vector<SizePoint> pts;
  std::vector<std::size_t> orig;

  explicit SortedPoints(std::span<const SizePoint> input) {
    orig.resize(input.size());
    std::iota(orig.begin(), orig.end(), std::size_t{0});
    std::stable_sort(orig.begin(), orig.end(),
                     [&](std::size_t a, std::size_t b) {
                       return input[a] < input[b];
                     });
    pts.reserve(input.size());
    for (const std::size_t i : orig) pts.push_back(input[i]);
  }
};

inline double point_distance(const SizePoint& a, const SizePoint& b,
                             SizeDistance metric) {
  return metric == SizeDistance::Euclidean ? euclidean_distance(a, b)
                                           : one_minus_iou_distance(a, b);
}

struct RawClustering {
  std::vector<int> labels;  // per sorted point; -1 noise
  std::vector<double> sse_trace;
};

inline RawClustering kmeans_impl(const std::vector<SizePoint>& pts,
                                 const ClusterParams& params) {
  const std::size_t n = pts.size();
  const std::size_t k = params.k;
  if (k < 1) throw std::domain_error("cluster: kmeans needs k >= 1");
  if (n < k) {
    throw std::domain_error("cluster: kmeans needs at least k points");
  }

  // seeded farthest-point start on the sorted points
  std::mt19937_64 rng(params.seed);
  std::vector<SizePoint> centers;
  centers.push_back(pts[rng() % n]);
  std::vector<double> nearest(n);
  while (centers.size() < k) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (const SizePoint& c : centers) {
        d = std::min(d, point_distance(pts[i], c, params.distance));
      }
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    centers.push_back(pts[far]);
  }

  RawClustering out;
  out.labels.assign(n, 0);
  std::vector<int> prev(n, -1);
  std::vector<std::size_t> count(k);
  for (std::size_t iter = 0; iter < params.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = point_distance(pts[i], centers[c], params.distance);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      out.labels[i] = best;
    }

    // hand an empty cluster the point farthest from its current center
    std::fill(count.begin(), count.end(), 0);
    for (const int l : out.labels) ++count[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto l = static_cast<std::size_t>(out.labels[i]);
        if (count[l] <= 1) continue;
        const double d = point_distance(pts[i], centers[l], params.distance);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      if (far == n) break;  // all occupied clusters are singletons
      --count[static_cast<std::size_t>(out.labels[far])];
      out.labels[far] = static_cast<int>(c);
      count[c] = 1;
    }

    for (std::size_t c = 0; c < k; ++c) centers[c] = {0.0, 0.0};
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(out.labels[i]);
      centers[c][0] += pts[i][0];
      centers[c][1] += pts[i][1];
      ++count[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      centers[c][0] /= static_cast<double>(count[c]);
      centers[c][1] /= static_cast<double>(count[c]);
    }

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(out.labels[i]);
      const double dw = pts[i][0] - centers[c][0];
      const double dh = pts[i][1] - centers[c][1];
      sse += dw * dw + dh * dh;
    }
    out.sse_trace.push_back(sse);

    if (out.labels == prev) break;
    prev = out.labels;
  }
  return out;
}

inline RawClustering agglomerative_impl(const std::vector<SizePoint>& pts,
                                        std::size_t k) {
  const std::size_t n = pts.size();
  if (k < 1) throw std::domain_error("cluster: agglomerative needs k >= 1");
  if (n < k) {
    throw std::domain_error("cluster: agglomerative needs at least k points");
  }

  // average linkage via Lance-Williams updates on a dense distance matrix
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = euclidean_distance(pts[i], pts[j]);
    }
  }
  std::vector<bool> active(n, true);
  std::vector<double> size(n, 1.0);
  std::vector<int> labels(n);
  std::iota(labels.begin(), labels.end(), 0);

  std::size_t remaining = n;
  while (remaining > k) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    for (std::size_t m = 0; m < n; ++m) {
      if (!active[m] || m == bi || m == bj) continue;
      const double d = (size[bi] * dist[bi][m] + size[bj] * dist[bj][m]) /
                       (size[bi] + size[bj]);
      dist[bi][m] = dist[m][bi] = d;
    }
    size[bi] += size[bj];
    active[bj] = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] == static_cast<int>(bj)) labels[i] = static_cast<int>(bi);
    }
    --remaining;
  }

  RawClustering out;
  out.labels = std::move(labels);
  return out;
}

inline RawClustering dbscan_impl(const std::vector<SizePoint>& pts,
                                 double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) {
    throw std::domain_error("cluster: dbscan needs a positive eps");
  }
  if (min_pts < 1) {
    throw std::domain_error("cluster: dbscan needs min_pts >= 1");
  }
  const std::size_t n = pts.size();
  constexpr int kNone = -2;
  constexpr int kNoise = -1;

  const auto neighbors = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && euclidean_distance(pts[i], pts[j]) <= eps) {
        out.push_back(j);
      }
    }
    return out;
  };

  RawClustering out;
  out.labels.assign(n, kNone);
  int cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.labels[i] != kNone) continue;
    auto seed = neighbors(i);
    if (seed.size() + 1 < min_pts) {
      out.labels[i] = kNoise;
      continue;
    }
    out.labels[i] = cluster;
    for (std::size_t s = 0; s < seed.size(); ++s) {
      const std::size_t j = seed[s];
      if (out.labels[j] == kNoise) out.labels[j] = cluster;  // border point
      if (out.labels[j] != kNone) continue;
      out.labels[j] = cluster;
      const auto more = neighbors(j);
      if (more.size() + 1 >= min_pts) {
        seed.insert(seed.end(), more.begin(), more.end());
      }
    }
    ++cluster;
  }
  return out;
}

inline RawClustering meanshift_impl(const std::vector<SizePoint>& pts,
                                    double bandwidth,
                                    std::size_t max_iterations) {
  if (!(bandwidth > 0.0)) {
    throw std::domain_error("cluster: meanshift needs a positive bandwidth");
  }
  const std::size_t n = pts.size();
  const double tol = 1e-6 * bandwidth;

  std::vector<SizePoint> modes(n);
  for (std::size_t i = 0; i < n; ++i) {
    SizePoint x = pts[i];
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
      SizePoint next{0.0, 0.0};
      std::size_t inside = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (euclidean_distance(x, pts[j]) <= bandwidth) {
          next[0] += pts[j][0];
          next[1] += pts[j][1];
          ++inside;
        }
      }
      next[0] /= static_cast<double>(inside);
      next[1] /= static_cast<double>(inside);
      const double moved = euclidean_distance(x, next);
      x = next;
      if (moved < tol) break;
    }
    modes[i] = x;
  }

  // merge modes closer than half a bandwidth, first mode is the group anchor
  RawClustering out;
  out.labels.assign(n, -1);
  std::vector<SizePoint> anchors;
  for (std::size_t i = 0; i < n; ++i) {
    int group = -1;
    for (std::size_t g = 0; g < anchors.size(); ++g) {
      if (euclidean_distance(modes[i], anchors[g]) <= 0.5 * bandwidth) {
        group = static_cast<int>(g);
        break;
      }
    }
    if (group < 0) {
      anchors.push_back(modes[i]);
      group = static_cast<int>(anchors.size()) - 1;
    }
    out.labels[i] = group;
  }
  return out;
}

inline double auto_dbscan_eps(const std::vector<SizePoint>& pts,
                              std::size_t min_pts) {
  const std::size_t n = pts.size();
  const std::size_t kth = std::min(min_pts, n - 1);
  std::vector<double> kth_dist;
  kth_dist.reserve(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.push_back(euclidean_distance(pts[i], pts[j]));
    }
    std::nth_element(row.begin(), row.begin() + (kth - 1), row.end());
    kth_dist.push_back(row[kth - 1]);
  }
  std::nth_element(kth_dist.begin(), kth_dist.begin() + kth_dist.size() / 2,
                   kth_dist.end());
  return 1.5 * kth_dist[kth_dist.size() / 2];
}

inline double auto_meanshift_bandwidth(const std::vector<SizePoint>& pts) {
  const std::size_t n = std::min<std::size_t>(pts.size(), 2000);
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d.push_back(euclidean_distance(pts[i], pts[j]));
    }
  }
  if (d.empty()) return 0.0;
  std::nth_element(d.begin(), d.begin() + d.size() / 2, d.end());
  return 0.5 * d[d.size() / 2];
}

}  // namespace detail

inline std::string cluster_method_name(ClusterMethod m) {
  switch (m) {
    case ClusterMethod::KMeans:
      return "kmeans";
    case ClusterMethod::Agglomerative:
      return "agglomerative";
    case ClusterMethod::Dbscan:
      return "dbscan";
    case ClusterMethod::MeanShift:
      return "meanshift";
  }
  return "?";
}

inline ClusterMethod parse_cluster_method(std::string_view name) {
  if (name == "kmeans") return ClusterMethod::KMeans;
  if (name == "agglomerative") return ClusterMethod::Agglomerative;
  if (name == "dbscan") return ClusterMethod::Dbscan;
  if (name == "meanshift") return ClusterMethod::MeanShift;
  throw std::invalid_argument("unknown cluster method: " + std::string(name));
}

/// Clusters the (w, h) points with the selected method. Deterministic given
/// the seed and independent of the input point order up to the assignment
/// labels of exactly duplicated points.
inline ClusterScheme cluster(std::span<const SizePoint> points,
                             ClusterMethod method,
                             const ClusterParams& params) {
  if (points.empty()) {
    throw std::domain_error("cluster: no points");
  }
  const detail::SortedPoints sorted(points);

  detail::RawClustering raw;
  switch (method) {
    case ClusterMethod::KMeans:
      raw = detail::kmeans_impl(sorted.pts, params);
      break;
    case ClusterMethod::Agglomerative:
      raw = detail::agglomerative_impl(sorted.pts, params.k);
      break;
    case ClusterMethod::Dbscan: {
      const double eps = params.eps > 0.0
                             ? params.eps
                             : detail::auto_dbscan_eps(sorted.pts,
                                                       params.min_pts);
      raw = detail::dbscan_impl(sorted.pts, eps, params.min_pts);
      break;
    }
    case ClusterMethod::MeanShift: {
      const double bw = params.bandwidth > 0.0
                            ? params.bandwidth
                            : detail::auto_meanshift_bandwidth(sorted.pts);
      raw = detail::meanshift_impl(sorted.pts, bw, params.max_iterations);
      break;
    }
  }

  // centroids per raw label
  std::map<int, std::pair<SizePoint, std::size_t>> groups;
  for (std::size_t i = 0; i < sorted.pts.size(); ++i) {
    const int l = raw.labels[i];
    if (l < 0) continue;
    auto& [sum, cnt] = groups[l];
    sum[0] += sorted.pts[i][0];
    sum[1] += sorted.pts[i][1];
    ++cnt;
  }

  struct Centered {
    int raw_label;
    SizePoint center;
  };
  std::vector<Centered> ordered;
  ordered.reserve(groups.size());
  for (const auto& [label, sc] : groups) {
    ordered.push_back(Centered{
        label,
        {sc.first[0] / static_cast<double>(sc.second),
         sc.first[1] / static_cast<double>(sc.second)}});
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Centered& a, const Centered& b) {
                     return a.center < b.center;
                   });
  std::map<int, int> relabel;
  for (std::size_t c = 0; c < ordered.size(); ++c) {
    relabel[ordered[c].raw_label] = static_cast<int>(c);
  }

  ClusterScheme scheme;
  scheme.method = cluster_method_name(method);
  scheme.k = ordered.size();
  scheme.sse_trace = std::move(raw.sse_trace);
  scheme.assignment.assign(points.size(), -1);
  for (std::size_t i = 0; i < sorted.pts.size(); ++i) {
    const int l = raw.labels[i];
    if (l < 0) {
      ++scheme.noise_count;
    } else {
      scheme.assignment[sorted.orig[i]] = relabel.at(l);
    }
  }
  for (const Centered& c : ordered) {
    scheme.centers.push_back(c.center);
    scheme.anchor_sizes.push_back(std::sqrt(c.center[0] * c.center[1]));
    scheme.aspect_ratios.push_back(c.center[0] / c.center[1]);
  }
  if (scheme.k > 0) {
    scheme.indices =
        internal_indices(points, std::span<const int>(scheme.assignment));
  }
  return scheme;
}

inline ClusterScheme cluster(const AnnotationSet& set, ClusterMethod method,
                             const ClusterParams& params) {
  return cluster(std::span<const SizePoint>(set.sizes), method, params);
}

struct RecommendOptions {
  std::size_t k_min = 2;
  std::size_t k_max = 8;
  ClusterParams params;
};

struct CandidateFailure {
  std::string method;
  std::string reason;
};

struct RecommendReport {
  std::vector<ClusterScheme> ranked;  // valid candidates, best first
  std::vector<CandidateFailure> failures;
};

namespace detail {

inline bool scheme_usable(const ClusterScheme& s, std::string& why) {
  if (s.k < 2) {
    why = "fewer than two clusters";
    return false;
  }
  if (!s.indices.silhouette || !std::isfinite(*s.indices.silhouette) ||
      !s.indices.calinski_harabasz) {
    why = "validity indices undefined";
    return false;
  }
  for (std::size_t i = 0; i < s.centers.size(); ++i) {
    for (std::size_t j = i + 1; j < s.centers.size(); ++j) {
      const double scale = 1.0 + std::max(std::abs(s.centers[i][0]),
                                          std::abs(s.centers[i][1]));
      if (std::abs(s.centers[i][0] - s.centers[j][0]) <= 1e-9 * scale &&
          std::abs(s.centers[i][1] - s.centers[j][1]) <= 1e-9 * scale) {
        why = "coincident cluster centers";
        return false;
      }
    }
  }
  return true;
}

}  // namespace detail

/// Evaluates kmeans and agglomerative over the k range plus the autonomous-k
/// density methods, ranks every usable scheme by silhouette then
/// Calinski-Harabasz, and keeps the ranking stable for exact ties.
inline RecommendReport recommend_report(const AnnotationSet& set,
                                        const RecommendOptions& opts) {
  if (set.sizes.size() < 10) {
    throw std::domain_error("recommend: need at least 10 boxes");
  }
  if (opts.k_min < 2 || opts.k_max < opts.k_min) {
    throw std::domain_error("recommend: need 2 <= k_min <= k_max");
  }

  RecommendReport report;
  const auto consider = [&](ClusterMethod method, std::size_t k) {
    ClusterParams p = opts.params;
    p.k = k;
    const std::string tag =
        cluster_method_name(method) +
        (method == ClusterMethod::KMeans ||
                 method == ClusterMethod::Agglomerative
             ? " k=" + std::to_string(k)
             : std::string());
    try {
      ClusterScheme s = cluster(set, method, p);
      std::string why;
      if (detail::scheme_usable(s, why)) {
        report.ranked.push_back(std::move(s));
      } else {
        report.failures.push_back({tag, why});
      }
    } catch (const std::exception& e) {
      report.failures.push_back({tag, e.what()});
    }
  };

  for (std::size_t k = opts.k_min; k <= opts.k_max; ++k) {
    consider(ClusterMethod::KMeans, k);
  }
  for (std::size_t k = opts.k_min; k <= opts.k_max; ++k) {
    consider(ClusterMethod::Agglomerative, k);
  }
  consider(ClusterMethod::Dbscan, 0);
  consider(ClusterMethod::MeanShift, 0);

  std::stable_sort(report.ranked.begin(), report.ranked.end(),
                   [](const ClusterScheme& a, const ClusterScheme& b) {
                     if (*a.indices.silhouette != *b.indices.silhouette) {
                       return *a.indices.silhouette > *b.indices.silhouette;
                     }
                     return *a.indices.calinski_harabasz >
                            *b.indices.calinski_harabasz;
                   });

  if (report.ranked.size() < 2) {
    std::string msg = "recommend: no two usable schemes;";
    for (const CandidateFailure& f : report.failures) {
      msg += " [" + f.method + ": " + f.reason + "]";
    }
    throw std::domain_error(msg);
  }
  return report;
}

inline std::pair<ClusterScheme, ClusterScheme> recommend(
    const AnnotationSet& set, const RecommendOptions& opts) {
  RecommendReport report = recommend_report(set, opts);
  return {std::move(report.ranked[0]), std::move(report.ranked[1])};
}

}  // namespace boxeval
