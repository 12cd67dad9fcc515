// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "boxeval/gradcheck.hpp"

namespace {

using boxeval::Box;
using boxeval::Gradient4;
using boxeval::Loss;
using boxeval::LossKind;

double rel_err(double a, double n) {
  return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-7});
}

double max_rel(const Gradient4& a, const Gradient4& n) {
  return std::max({rel_err(a.dx1, n.dx1), rel_err(a.dy1, n.dy1),
                   rel_err(a.dx2, n.dx2), rel_err(a.dy2, n.dy2)});
}

TEST(FiniteDiff, FiniteOnSmoothRegion) {
  const Box rp(0.2, 0.1, 1.7, 2.3), gt(1.0, 1.2, 3.1, 2.9);
  for (const LossKind& kind : boxeval::all_loss_kinds()) {
    const Gradient4 g = boxeval::finite_diff_gradient(kind, rp, gt, 1e-5);
    EXPECT_TRUE(std::isfinite(g.dx1) && std::isfinite(g.dy1) &&
                std::isfinite(g.dx2) && std::isfinite(g.dy2))
        << boxeval::loss_name(kind);
  }
}

// central differences are exact on quadratics
TEST(FiniteDiff, QuadraticExactness) {
  const double h = 1e-5;
  const double x = 3.0;
  const auto f = [](double v) {
    return boxeval::pointwise_loss(v, boxeval::PointwiseKind::L2);
  };
  const double numeric = (f(x + h) - f(x - h)) / (2.0 * h);
  EXPECT_NEAR(numeric, 6.0, 1e-9);
}

TEST(FiniteDiff, MatchesAnalyticOnWorkedPair) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  for (const LossKind& kind :
       {LossKind{Loss::IoULinear}, LossKind::cdiou(Loss::IoULinear),
        LossKind::cdiou(Loss::GIoU)}) {
    const Gradient4 a = boxeval::gradient(rp, gt, kind);
    const Gradient4 n5 = boxeval::finite_diff_gradient(kind, rp, gt, 1e-5);
    const Gradient4 n6 = boxeval::finite_diff_gradient(kind, rp, gt, 1e-6);
    EXPECT_LT(max_rel(a, n5), 1e-6) << boxeval::loss_name(kind);
    EXPECT_LT(max_rel(a, n6), 1e-6) << boxeval::loss_name(kind);
  }
}

TEST(FiniteDiff, InvalidPerturbationNamesCoordinate) {
  // thinner than the step: perturbing x1 upward crosses x2
  const Box rp = Box::strict(0.0, 0.0, 1e-6, 1.0);
  const Box gt(1, 1, 3, 3);
  try {
    boxeval::finite_diff_gradient(LossKind{Loss::IoULinear}, rp, gt, 1e-5);
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_NE(std::string(e.what()).find("x1"), std::string::npos);
  }
}

TEST(FiniteDiff, RejectsNonPositiveStep) {
  const Box rp(0, 0, 2, 2), gt(1, 1, 3, 3);
  EXPECT_THROW(
      boxeval::finite_diff_gradient(LossKind{Loss::IoULinear}, rp, gt, 0.0),
      std::domain_error);
}

TEST(Sweep, ZeroPairsIsDomainError) {
  const auto kinds = boxeval::all_loss_kinds();
  EXPECT_THROW(boxeval::sweep(kinds, 0, 42), std::domain_error);
}

TEST(Sweep, DeterministicGivenSeed) {
  const std::vector<LossKind> kinds{LossKind{Loss::GIoU}, LossKind::cdiou()};
  const auto a = boxeval::sweep(kinds, 50, 42);
  const auto b = boxeval::sweep(kinds, 50, 42);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].max_rel_error, b[i].max_rel_error);
    EXPECT_EQ(a[i].mean_rel_error, b[i].mean_rel_error);
    EXPECT_EQ(a[i].pairs_rejected, b[i].pairs_rejected);
    EXPECT_EQ(a[i].worst_rp, b[i].worst_rp);
    EXPECT_EQ(a[i].worst_gt, b[i].worst_gt);
  }
  const auto c = boxeval::sweep(kinds, 50, 43);
  EXPECT_NE(a[0].max_rel_error, c[0].max_rel_error);
}

TEST(Sweep, AllKindsPassAtTolerance) {
  const auto kinds = boxeval::all_loss_kinds();
  const auto reports = boxeval::sweep(kinds, 200, 42);
  for (const auto& rep : reports) {
    EXPECT_TRUE(rep.pass) << boxeval::loss_name(rep.kind) << " max rel "
                          << rep.max_rel_error;
    EXPECT_EQ(rep.pairs_checked, 200u);
  }
}

// Central differences are second order: halving h cuts the error about 4x.
TEST(Sweep, SecondOrderConvergence) {
  const Box gt(0.5, -0.25, 3.0, 1.75);
  const LossKind kind = LossKind::cdiou(Loss::GIoU);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> jitter(-0.8, 0.8);
  std::vector<double> ratios;
  for (int t = 0; t < 400; ++t) {
    const Box rp(gt.x1 + jitter(rng), gt.y1 + jitter(rng),
                 gt.x2 + jitter(rng), gt.y2 + jitter(rng));
    if (!boxeval::detail::smooth_neighborhood(rp, gt, kind, 2e-3)) continue;
    const Gradient4 a = boxeval::gradient(rp, gt, kind);
    const Gradient4 big = boxeval::finite_diff_gradient(kind, rp, gt, 1e-3);
    const Gradient4 small = boxeval::finite_diff_gradient(kind, rp, gt, 5e-4);
    const double eb = std::max({std::abs(a.dx1 - big.dx1),
                                std::abs(a.dy1 - big.dy1),
                                std::abs(a.dx2 - big.dx2),
                                std::abs(a.dy2 - big.dy2)});
    const double es = std::max({std::abs(a.dx1 - small.dx1),
                                std::abs(a.dy1 - small.dy1),
                                std::abs(a.dx2 - small.dx2),
                                std::abs(a.dy2 - small.dy2)});
    if (eb < 1e-10 || es < 1e-12) continue;  // below roundoff floor
    ratios.push_back(eb / es);
  }
  ASSERT_GE(ratios.size(), 50u);
  std::nth_element(ratios.begin(), ratios.begin() + ratios.size() / 2,
                   ratios.end());
  const double median = ratios[ratios.size() / 2];
  EXPECT_GT(median, 2.0);
  EXPECT_LT(median, 8.0);
}

}  // namespace
