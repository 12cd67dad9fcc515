// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 boxeval contributors

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boxeval/box.hpp"
#include "boxeval/losses.hpp"
#include "boxeval/text.hpp"

namespace boxeval {

enum class LrPolicy { Fixed, Decayed, Floating };

/// Deterministic grid of regression scenarios: targets centered at the
/// origin, anchors placed on radii (in units of the target diagonal) around
/// them, with anchor scale cycling over the angle index.
struct ScenarioGrid {
  std::vector<double> target_aspect_ratios{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> target_areas{1.0};
  std::vector<double> anchor_aspect_ratios{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> anchor_scales{0.7, 1.0, 1.4};
  std::vector<double> offset_radii{0.0, 0.3, 0.6, 0.9, 1.2};
  std::size_t angles = 8;
};

struct SimulationConfig {
  ScenarioGrid grid;
  std::vector<LossKind> losses{
      LossKind{Loss::IoULog}, LossKind{Loss::GIoU}, LossKind{Loss::DIoU},
      LossKind{Loss::CIoU},   LossKind::cdiou(),
  };
  std::size_t iterations = 200;
  double learning_rate = 0.1;
  /// Non-empty: per-loss grid search for the fixed learning rate minimizing
  /// the final mean corner error. Empty: learning_rate is used as given.
  std::vector<double> lr_grid{0.001, 0.003, 0.01, 0.03, 0.05,
                              0.1,   0.15,  0.3,  1.0};
  LrPolicy policy = LrPolicy::Fixed;
  std::size_t window = 10;  // K: check interval for decayed/floating policies
  double factor = 1.05;
  /// false: bump the rate when the loss failed to decrease over the window
  /// (the prose rule). true: bump it when the loss decreased instead.
  bool literal_stagnation_rule = false;
  /// Convergence threshold as a fraction of the target diagonal.
  double error_threshold = 0.1;
  std::uint64_t seed = 0;

  void validate() const {
    if (iterations < 1) {
      throw std::domain_error("simulation: iteration budget must be >= 1");
    }
    if (!(learning_rate > 0.0)) {
      throw std::domain_error("simulation: learning rate must be positive");
    }
    if (policy == LrPolicy::Floating && !(factor > 1.0)) {
      throw std::domain_error(
          "simulation: floating-rate factor must exceed 1");
    }
    if (policy != LrPolicy::Fixed && window == 0) {
      throw std::domain_error("simulation: window must be positive");
    }
    if (losses.empty()) {
      throw std::domain_error("simulation: no losses configured");
    }
  }
};

struct Scenario {
  Box anchor;
  Box target;
};

inline std::vector<Scenario> generate_scenarios(const SimulationConfig& cfg) {
  const ScenarioGrid& g = cfg.grid;
  if (g.target_aspect_ratios.empty() || g.target_areas.empty() ||
      g.anchor_aspect_ratios.empty() || g.anchor_scales.empty() ||
      g.offset_radii.empty() || g.angles == 0) {
    throw std::domain_error("generate_scenarios: empty grid dimension");
  }
  std::vector<Scenario> out;
  out.reserve(g.target_aspect_ratios.size() * g.target_areas.size() *
              g.offset_radii.size() * g.angles *
              g.anchor_aspect_ratios.size());
  for (const double ta : g.target_aspect_ratios) {
    for (const double area : g.target_areas) {
      const double tw = std::sqrt(area * ta);
      const double th = std::sqrt(area / ta);
      const Box target(-0.5 * tw, -0.5 * th, 0.5 * tw, 0.5 * th);
      const double diag = diagonal(target);
      for (const double radius : g.offset_radii) {
        for (std::size_t j = 0; j < g.angles; ++j) {
          const double theta =
              2.0 * std::numbers::pi * static_cast<double>(j) /
              static_cast<double>(g.angles);
          const double cx = radius * diag * std::cos(theta);
          const double cy = radius * diag * std::sin(theta);
          const double scale = g.anchor_scales[j % g.anchor_scales.size()];
          for (const double aa : g.anchor_aspect_ratios) {
            const double aw = std::sqrt(area * aa) * scale;
            const double ah = std::sqrt(area / aa) * scale;
            out.push_back(Scenario{
                Box(cx - 0.5 * aw, cy - 0.5 * ah, cx + 0.5 * aw,
                    cy + 0.5 * ah),
                target});
          }
        }
      }
    }
  }
  return out;
}

/// One learning-rate check: compares loss_i against loss_{i-k} and bumps the
/// rate by `factor` when the loss failed to decrease (default rule) or when
/// it decreased (literal rule). Histories shorter than k+1 leave the rate
/// untouched.
inline double floating_lr_step(double lr, std::span<const double> history,
                               std::size_t k, double factor,
                               bool literal_rule = false) {
  if (k == 0) {
    throw std::domain_error("floating_lr_step: window must be positive");
  }
  if (history.size() < k + 1) return lr;
  const double ls = history.back() - history[history.size() - 1 - k];
  const bool bump = literal_rule ? (ls < 0.0) : (ls >= 0.0);
  return bump ? factor * lr : lr;
}

struct LossCurve {
  LossKind kind;
  double learning_rate = 0.0;  // tuned or configured base rate
  std::vector<double> mean_loss;              // iterations + 1 samples
  std::vector<double> mean_corner_error;      // corner_distance_sum / 4
  std::vector<double> mean_normalized_error;  // corner error / target diag
  std::vector<double> lr_trace;               // rate in effect per sample
  std::ptrdiff_t iterations_to_threshold = -1;
  std::size_t aborted_scenarios = 0;
};

struct SimulationReport {
  std::size_t scenario_count = 0;
  std::size_t iterations = 0;
  LrPolicy policy = LrPolicy::Fixed;
  double error_threshold = 0.1;
  std::vector<LossCurve> curves;
};

namespace detail {

struct ScenarioState {
  double c[4];       // current corner coordinates
  Box target;
  double inv_diag;   // 1 / diagonal(target)
  Gradient4 grad;
  bool active = true;
};

}  // namespace detail

/// Gradient-descends every anchor onto its target under one loss at one
/// base rate, honoring the config's iteration budget and rate policy.
inline LossCurve descend(std::span<const Scenario> scenarios,
                         const LossKind& kind, double lr0,
                         const SimulationConfig& cfg) {
  LossCurve curve;
  curve.kind = kind;
  curve.learning_rate = lr0;

  std::vector<detail::ScenarioState> states;
  states.reserve(scenarios.size());
  for (const Scenario& s : scenarios) {
    detail::ScenarioState st;
    st.c[0] = s.anchor.x1;
    st.c[1] = s.anchor.y1;
    st.c[2] = s.anchor.x2;
    st.c[3] = s.anchor.y2;
    st.target = s.target;
    st.inv_diag = 1.0 / diagonal(s.target);
    states.push_back(st);
  }

  // evaluates loss and gradient at the current position of every active
  // scenario and appends one sample to each curve
  const auto sample = [&] {
    double sum_loss = 0.0, sum_err = 0.0, sum_norm = 0.0;
    std::size_t active = 0;
    for (detail::ScenarioState& st : states) {
      if (!st.active) continue;
      const Box box(st.c[0], st.c[1], st.c[2], st.c[3]);
      const auto e = detail::eval_impl(box, st.target, kind, nullptr);
      if (!std::isfinite(e.value)) {
        st.active = false;
        ++curve.aborted_scenarios;
        continue;
      }
      st.grad = e.grad;
      sum_loss += e.value;
      const double err = 0.25 * corner_distance_sum(box, st.target);
      sum_err += err;
      sum_norm += err * st.inv_diag;
      ++active;
    }
    const double inv = active > 0 ? 1.0 / static_cast<double>(active) : 0.0;
    curve.mean_loss.push_back(sum_loss * inv);
    curve.mean_corner_error.push_back(sum_err * inv);
    curve.mean_normalized_error.push_back(sum_norm * inv);
  };

  double lr = lr0;
  sample();
  curve.lr_trace.push_back(lr);

  for (std::size_t t = 1; t <= cfg.iterations; ++t) {
    for (detail::ScenarioState& st : states) {
      if (!st.active) continue;
      st.c[0] -= lr * st.grad.dx1;
      st.c[1] -= lr * st.grad.dy1;
      st.c[2] -= lr * st.grad.dx2;
      st.c[3] -= lr * st.grad.dy2;
      if (!std::isfinite(st.c[0]) || !std::isfinite(st.c[1]) ||
          !std::isfinite(st.c[2]) || !std::isfinite(st.c[3])) {
        st.active = false;
        ++curve.aborted_scenarios;
        continue;
      }
      // descent may swap corners; keep the box canonical
      if (st.c[0] > st.c[2]) std::swap(st.c[0], st.c[2]);
      if (st.c[1] > st.c[3]) std::swap(st.c[1], st.c[3]);
    }
    sample();
    curve.lr_trace.push_back(lr);

    if (cfg.policy == LrPolicy::Floating && t % cfg.window == 0) {
      lr = floating_lr_step(
          lr, std::span<const double>(curve.mean_loss.data(), t + 1),
          cfg.window, cfg.factor, cfg.literal_stagnation_rule);
    } else if (cfg.policy == LrPolicy::Decayed && t % cfg.window == 0) {
      lr *= 0.5;
    }
  }

  for (std::size_t t = 0; t < curve.mean_normalized_error.size(); ++t) {
    if (curve.mean_normalized_error[t] < cfg.error_threshold) {
      curve.iterations_to_threshold = static_cast<std::ptrdiff_t>(t);
      break;
    }
  }
  return curve;
}

/// Gradient-descends every anchor onto its target under each configured
/// loss and records mean loss / corner-error curves. Deterministic.
inline SimulationReport run(const SimulationConfig& cfg) {
  cfg.validate();
  const std::vector<Scenario> scenarios = generate_scenarios(cfg);

  SimulationReport report;
  report.scenario_count = scenarios.size();
  report.iterations = cfg.iterations;
  report.policy = cfg.policy;
  report.error_threshold = cfg.error_threshold;

  for (const LossKind& kind : cfg.losses) {
    double lr = cfg.learning_rate;
    if (!cfg.lr_grid.empty()) {
      double best_err = std::numeric_limits<double>::infinity();
      for (const double candidate : cfg.lr_grid) {
        if (!(candidate > 0.0)) {
          throw std::domain_error("simulation: lr grid entries must be > 0");
        }
        const LossCurve probe = descend(scenarios, kind, candidate, cfg);
        const double err = probe.mean_corner_error.back();
        if (err < best_err) {
          best_err = err;
          lr = candidate;
        }
      }
    }
    report.curves.push_back(descend(scenarios, kind, lr, cfg));
  }
  return report;
}

inline const char* lr_policy_name(LrPolicy p) {
  switch (p) {
    case LrPolicy::Fixed:
      return "fixed";
    case LrPolicy::Decayed:
      return "decayed";
    case LrPolicy::Floating:
      return "floating";
  }
  return "?";
}

inline LrPolicy parse_lr_policy(std::string_view name) {
  if (name == "fixed") return LrPolicy::Fixed;
  if (name == "decayed") return LrPolicy::Decayed;
  if (name == "floating") return LrPolicy::Floating;
  throw std::invalid_argument("unknown lr policy: " + std::string(name));
}

/// Plot-ready table: loss,iteration,mean_loss,mean_corner_error,lr.
inline void write_curves_csv(const SimulationReport& report,
                             std::ostream& os) {
  os << "loss,iteration,mean_loss,mean_corner_error,lr\n";
  for (const LossCurve& c : report.curves) {
    const std::string name = loss_name(c.kind);
    for (std::size_t t = 0; t < c.mean_loss.size(); ++t) {
      os << name << ',' << t << ',' << format_fixed(c.mean_loss[t]) << ','
         << format_fixed(c.mean_corner_error[t]) << ','
         << format_fixed(c.lr_trace[t]) << '\n';
    }
  }
}

}  // namespace boxeval
