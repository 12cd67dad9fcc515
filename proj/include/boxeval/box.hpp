// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace boxeval {

/// Axis-aligned rectangle in corner form with x1 <= x2 and y1 <= y2.
///
/// The converting constructor canonicalizes swapped corner pairs by sorting,
/// so corner pairs read from annotation files in either order are accepted.
/// strict() validates instead of sorting. Coordinates must be finite; zero
/// width or height is legal.
struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  Box() = default;

  Box(double ax1, double ay1, double ax2, double ay2) {
    if (!std::isfinite(ax1) || !std::isfinite(ay1) || !std::isfinite(ax2) ||
        !std::isfinite(ay2)) {
      throw std::invalid_argument("Box: coordinates must be finite");
    }
    x1 = std::min(ax1, ax2);
    x2 = std::max(ax1, ax2);
    y1 = std::min(ay1, ay2);
    y2 = std::max(ay1, ay2);
  }

  static Box strict(double ax1, double ay1, double ax2, double ay2) {
    if (!std::isfinite(ax1) || !std::isfinite(ay1) || !std::isfinite(ax2) ||
        !std::isfinite(ay2)) {
      throw std::invalid_argument("Box::strict: coordinates must be finite");
    }
    if (!(ax1 <= ax2) || !(ay1 <= ay2)) {
      throw std::invalid_argument("Box::strict: corners out of order");
    }
    Box b;
    b.x1 = ax1;
    b.y1 = ay1;
    b.x2 = ax2;
    b.y2 = ay2;
    return b;
  }

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1 + x2); }
  double center_y() const { return 0.5 * (y1 + y2); }
  bool degenerate() const { return x1 == x2 || y1 == y2; }

  friend bool operator==(const Box&, const Box&) = default;
};

inline double area(const Box& b) { return b.area(); }

inline double intersection_area(const Box& a, const Box& b) {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

/// |a| + |b| - |a ∩ b|, grouped so the smaller area cancels against the
/// intersection first. When one box contains the other those two terms are
/// bit-identical and the union equals the outer area exactly.
inline double union_area(const Box& a, const Box& b) {
  const double aa = a.area();
  const double ab = b.area();
  return std::max(aa, ab) + (std::min(aa, ab) - intersection_area(a, b));
}

/// Minimum bounding rectangle of the pair.
inline Box enclosing_box(const Box& a, const Box& b) {
  Box c;
  c.x1 = std::min(a.x1, b.x1);
  c.y1 = std::min(a.y1, b.y1);
  c.x2 = std::max(a.x2, b.x2);
  c.y2 = std::max(a.y2, b.y2);
  return c;
}

inline double diagonal(const Box& b) {
  return std::hypot(b.width(), b.height());
}

/// Sum of the Euclidean distances between same-named corners:
/// top-left to top-left, top-right to top-right, and so on.
inline double corner_distance_sum(const Box& a, const Box& b) {
  return std::hypot(a.x1 - b.x1, a.y1 - b.y1) +
         std::hypot(a.x2 - b.x2, a.y1 - b.y1) +
         std::hypot(a.x1 - b.x1, a.y2 - b.y2) +
         std::hypot(a.x2 - b.x2, a.y2 - b.y2);
}

inline double center_distance_sq(const Box& a, const Box& b) {
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return dx * dx + dy * dy;
}

}  // namespace boxeval
