// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "boxeval/metrics.hpp"

namespace {

using boxeval::Box;
using boxeval::Metric;
using boxeval::MetricKind;

Box random_box(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-6.0, 6.0);
  std::uniform_real_distribution<double> size(0.05, 5.0);
  const double x = pos(rng), y = pos(rng);
  return Box(x, y, x + size(rng), y + size(rng));
}

TEST(Metrics, IouWorkedValues) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_NEAR(boxeval::iou(rp, gt), 1.0 / 7.0, 1e-15);
  EXPECT_EQ(boxeval::iou(gt, gt), 1.0);
  EXPECT_EQ(boxeval::iou(Box(0, 0, 1, 1), Box(5, 5, 6, 6)), 0.0);
}

TEST(Metrics, IouBothDegenerateIsDomainError) {
  const Box p(1, 1, 1, 3), q(0, 2, 4, 2);
  EXPECT_THROW(boxeval::iou(p, q), std::domain_error);
}

TEST(Metrics, GiouWorkedValues) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_NEAR(boxeval::giou(rp, gt), -5.0 / 63.0, 1e-15);
  EXPECT_EQ(boxeval::giou(gt, gt), 1.0);
  // containment: penalty vanishes exactly
  const Box outer(0, 0, 4, 2), inner(1, 0, 3, 2);
  EXPECT_EQ(boxeval::giou(inner, outer), boxeval::iou(inner, outer));
  EXPECT_EQ(boxeval::giou(inner, outer), 0.5);
}

TEST(Metrics, DiouRatioWorkedValues) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_NEAR(boxeval::diou_ratio(rp, gt), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(boxeval::diou_ratio(gt, gt), 0.0);
  const Box wide(0, 0.5, 4, 1.5), gt2(0, 0, 4, 2);
  EXPECT_NEAR(boxeval::diou_ratio(wide, gt2), 2.0 / (4.0 * std::sqrt(20.0)),
              1e-15);
}

TEST(Metrics, DiouRatioCoincidentPointsIsDomainError) {
  const Box p(1, 1, 1, 1);
  EXPECT_THROW(boxeval::diou_ratio(p, p), std::domain_error);
}

TEST(Metrics, CdiouWorkedValues) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_NEAR(boxeval::cdiou(rp, gt, 0.001), 0.14352380952380953, 1e-12);
  EXPECT_NEAR(boxeval::cdiou(gt, gt, 0.001), 1.001, 1e-15);
}

TEST(Metrics, CdiouLambdaZeroReducesToIou) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 500; ++t) {
    const Box a = random_box(rng), b = random_box(rng);
    EXPECT_EQ(boxeval::cdiou(a, b, 0.0), boxeval::iou(a, b));
  }
}

TEST(Metrics, LambdaOutsideUnitIntervalRejected) {
  const Box a(0, 0, 1, 1), b(0, 0, 2, 2);
  EXPECT_THROW(boxeval::cdiou(a, b, -0.1), std::invalid_argument);
  EXPECT_THROW(boxeval::cdiou(a, b, 1.5), std::invalid_argument);
  EXPECT_THROW(MetricKind(Metric::CDIoU, 2.0), std::invalid_argument);
}

TEST(Metrics, RangesOverRandomPairs) {
  std::mt19937_64 rng(2026);
  const double lambda = 0.001;
  for (int t = 0; t < 100000; ++t) {
    const Box a = random_box(rng), b = random_box(rng);
    const double i = boxeval::iou(a, b);
    const double g = boxeval::giou(a, b);
    const double d = boxeval::diou_ratio(a, b);
    const double c = boxeval::cdiou(a, b, lambda);
    ASSERT_GE(i, 0.0);
    ASSERT_LE(i, 1.0);
    ASSERT_GT(g, -1.0);
    ASSERT_LE(g, 1.0);
    ASSERT_GE(d, 0.0);
    ASSERT_LT(d, 1.0);
    ASSERT_GE(c, i);
    ASSERT_LE(c, i + lambda);
    ASSERT_LE(g, i);
  }
}

TEST(Metrics, GiouEqualsIouUnderContainment) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int t = 0; t < 2000; ++t) {
    const Box outer = random_box(rng);
    const double w = outer.width() * frac(rng);
    const double h = outer.height() * frac(rng);
    const double x = outer.x1 + (outer.width() - w) * frac(rng);
    const double y = outer.y1 + (outer.height() - h) * frac(rng);
    const Box inner(x, y, x + w, y + h);
    ASSERT_EQ(boxeval::giou(inner, outer), boxeval::iou(inner, outer));
    ASSERT_EQ(boxeval::giou(outer, inner), boxeval::iou(outer, inner));
  }
}

TEST(Metrics, JointScaleAndTranslationInvariance) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shift(-30.0, 30.0);
  std::uniform_real_distribution<double> scale(0.05, 12.0);
  for (int t = 0; t < 1000; ++t) {
    const Box a = random_box(rng), b = random_box(rng);
    const double s = scale(rng), dx = shift(rng), dy = shift(rng);
    const auto map = [&](const Box& v) {
      return Box(v.x1 * s + dx, v.y1 * s + dy, v.x2 * s + dx, v.y2 * s + dy);
    };
    const Box a2 = map(a), b2 = map(b);
    const auto near = [](double u, double v) {
      ASSERT_NEAR(u, v, 1e-9 * (1.0 + std::abs(u)));
    };
    near(boxeval::iou(a, b), boxeval::iou(a2, b2));
    near(boxeval::giou(a, b), boxeval::giou(a2, b2));
    near(boxeval::diou_ratio(a, b), boxeval::diou_ratio(a2, b2));
    near(boxeval::cdiou(a, b), boxeval::cdiou(a2, b2));
  }
}

TEST(Metrics, SymmetryOfIouDiouAndCdiou) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 1000; ++t) {
    const Box a = random_box(rng), b = random_box(rng);
    ASSERT_EQ(boxeval::iou(a, b), boxeval::iou(b, a));
    ASSERT_EQ(boxeval::diou_ratio(a, b), boxeval::diou_ratio(b, a));
    ASSERT_EQ(boxeval::cdiou(a, b), boxeval::cdiou(b, a));
  }
}

// Equal-IoU pair that IoU cannot separate but CDIoU ranks apart.
TEST(Metrics, DiscriminationPair) {
  const Box gt(0, 0, 4, 2), rp1(1, 0, 3, 2), rp2(0, 0.5, 4, 1.5);
  EXPECT_EQ(boxeval::iou(rp1, gt), 0.5);
  EXPECT_EQ(boxeval::iou(rp2, gt), 0.5);
  EXPECT_NEAR(boxeval::diou_ratio(rp1, gt), 0.22360679774997896, 1e-12);
  EXPECT_NEAR(boxeval::diou_ratio(rp2, gt), 0.11180339887498948, 1e-12);
  EXPECT_GT(boxeval::cdiou(rp2, gt, 0.001), boxeval::cdiou(rp1, gt, 0.001));
}

TEST(Metrics, RankWorkedExample) {
  const Box gt(0, 0, 4, 2);
  const std::vector<Box> rps{Box(1, 0, 3, 2), Box(0, 0.5, 4, 1.5)};
  const auto order =
      boxeval::rank_proposals(rps, gt, MetricKind(Metric::CDIoU, 0.001));
  ASSERT_EQ(order.size(), 2u);
  EXPECT_EQ(order[0], 1u);
  EXPECT_EQ(order[1], 0u);
}

TEST(Metrics, RankStableOnExactTies) {
  const Box gt(0, 0, 4, 2);
  const Box p(1, 0, 3, 2);
  const std::vector<Box> rps{p, p, p};
  for (const Metric m : {Metric::IoU, Metric::GIoU, Metric::CDIoU}) {
    const auto order = boxeval::rank_proposals(rps, gt, MetricKind(m));
    EXPECT_EQ(order, (std::vector<std::size_t>{0, 1, 2}));
  }
}

TEST(Metrics, RankPerfectMatchFirst) {
  const Box gt(0, 0, 4, 2);
  const std::vector<Box> rps{gt, Box(10, 10, 11, 11)};
  for (const Metric m : {Metric::IoU, Metric::GIoU, Metric::CDIoU}) {
    const auto order = boxeval::rank_proposals(rps, gt, MetricKind(m));
    EXPECT_EQ(order, (std::vector<std::size_t>{0, 1}));
  }
}

// the values quoted in the README
TEST(Metrics, ReadmeSnippetValues) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_NEAR(boxeval::cdiou(rp, gt, 0.001), 0.143524, 5e-7);
}

TEST(Metrics, RankEmptyIsDomainError) {
  EXPECT_THROW(
      boxeval::rank_proposals(std::vector<Box>{}, Box(0, 0, 1, 1),
                              MetricKind(Metric::IoU)),
      std::domain_error);
}

}  // namespace
