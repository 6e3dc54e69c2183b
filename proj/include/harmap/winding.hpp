#pragma once

#include <cmath>
#include <limits>
#include <span>

#include <string>

#include "harmap/core.hpp"
#include "harmap/families.hpp"
#include "harmap/sampling.hpp"

namespace harmap {

struct WindingSum {
  double turns = 0.0;         // total change of arg(c - target) / 2 pi
  double min_distance = 0.0;  // closest curve vertex to the target
  double max_chord = 0.0;     // longest polygon edge
  double max_step = 0.0;      // largest |change of arg| over one edge
  double min_ratio = 0.0;     // smallest (distance to target) / (edge length)
};

/// Argument increment of the closed polygon `curve` (last vertex joined to
/// the first) around `target`.
inline WindingSum winding_sum(std::span<const Complex> curve, Complex target) {
  WindingSum w;
  const std::size_t n = curve.size();
  if (n == 0) return w;
  w.min_distance = std::abs(curve[0] - target);
  w.min_ratio = std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = curve[i] - target;
    const Complex b = curve[(i + 1) % n] - target;
    const double step = std::arg(b / a);
    total += step;
    w.max_step = std::max(w.max_step, std::abs(step));
    w.max_chord = std::max(w.max_chord, std::abs(b - a));
    w.min_distance = std::min(w.min_distance, std::abs(b));
    const double chord = std::abs(b - a);
    if (chord > 0.0) w.min_ratio = std::min(w.min_ratio, std::min(std::abs(a), std::abs(b)) / chord);
  }
  w.turns = total / kTwoPi;
  return w;
}

struct WindingOptions {
  int start_n = 1024;
  int max_n = 1 << 20;
  double chord_factor = 10.0;  // required distance / chord, edge by edge
  double max_residual = 0.1;
};

struct WindingCount {
  int count = 0;
  int n = 0;            // boundary samples used
  double residual = 0.0;
  double min_distance = 0.0;
};

/// Winding number of f(r e^{it}) about `target`; doubles n until every edge
/// of the sampled curve is more than chord_factor of its own lengths away
/// from the target (a global max-chord rule can never hold for images that
/// are unbounded near a boundary singularity).
inline WindingCount winding_count(const HarmonicMap& f, double r, Complex target, const WindingOptions& opt = {}) {
  require_radius(r);
  require_finite(target, "winding target");
  for (int n = opt.start_n;; n *= 2) {
    const auto curve = sample_circle(f, r, n).f_values(f.omega().coefficient());
    const auto w = winding_sum(curve, target);
    if (w.min_ratio > opt.chord_factor) {
      const double rounded = std::round(w.turns);
      const double residual = std::abs(w.turns - rounded);
      if (residual >= opt.max_residual)
        throw Error(ErrorCode::ambiguous_winding, "winding residual " + std::to_string(residual));
      return {static_cast<int>(rounded), n, residual, w.min_distance};
    }
    if (2 * n > opt.max_n)
      throw Error(ErrorCode::near_curve, "target within " + std::to_string(w.min_distance) + " of the boundary image");
  }
}

}  // namespace harmap
