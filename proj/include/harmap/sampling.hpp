#pragma once

// Bulk evaluation of analytic and harmonic maps on circles, rays and polar
// grids. Values without a closed form are accumulated piecewise along the
// path, so each node costs one short quadrature instead of a full segment
// from the origin.

#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"

namespace harmap {

inline QuadratureOptions bulk_quadrature() {
  QuadratureOptions opt;
  opt.start_nodes = 8;
  opt.max_nodes = 1024;
  opt.tolerance = 1e-13;
  return opt;
}

inline Complex circle_node(double r, int j, int n) { return std::polar(r, kTwoPi * j / n); }

/// Values of the antiderivative of dfun (with value `start` at r) at the
/// nodes r e^{2 pi i j / n}, accumulated along chords.
template <typename F>
std::vector<Complex> accumulate_on_circle(const F& dfun, Complex start, double r, int n) {
  std::vector<Complex> out(n);
  if (n == 0) return out;
  out[0] = start;
  const auto opt = bulk_quadrature();
  Complex prev = circle_node(r, 0, n);
  for (int j = 1; j < n; ++j) {
    Complex cur = circle_node(r, j, n);
    out[j] = out[j - 1] + integrate_segment(dfun, prev, cur, opt);
    prev = cur;
  }
  return out;
}

/// Values of the antiderivative (zero at the origin) along a ray at the
/// given increasing radii.
template <typename F>
std::vector<Complex> accumulate_on_ray(const F& dfun, double angle, const std::vector<double>& radii) {
  std::vector<Complex> out(radii.size());
  const auto opt = bulk_quadrature();
  Complex prev{0.0, 0.0}, acc{0.0, 0.0};
  for (std::size_t j = 0; j < radii.size(); ++j) {
    Complex cur = std::polar(radii[j], angle);
    acc += integrate_segment(dfun, prev, cur, opt);
    out[j] = acc;
    prev = cur;
  }
  return out;
}

inline std::vector<Complex> analytic_on_circle(const AnalyticMap& h, double r, int n) {
  require_radius(r);
  std::vector<Complex> out(n);
  if (h.has_closed_value()) {
    for (int j = 0; j < n; ++j) out[j] = h.closed_value(circle_node(r, j, n));
    return out;
  }
  auto d = [&h](Complex w) { return h.derivative(w); };
  return accumulate_on_circle(d, antiderivative_on_segment(d, Complex{r, 0.0}), r, n);
}

/// G on the circle, where g = omega.coefficient() * G.
inline std::vector<Complex> g_base_on_circle(const HarmonicMap& f, double r, int n) {
  require_radius(r);
  if (f.omega().coefficient() == Complex{0.0, 0.0}) return std::vector<Complex>(n);
  if (f.g_base_closed()) return analytic_on_circle(*f.g_base_closed(), r, n);
  auto d = [&f](Complex w) { return f.g_base_derivative(w); };
  return accumulate_on_circle(d, antiderivative_on_segment(d, Complex{r, 0.0}), r, n);
}

/// Sampled analytic parts of a harmonic map on some point set; f values
/// for any rescaled coefficient of omega come for free.
struct SampledParts {
  std::vector<Complex> points;
  std::vector<Complex> h;
  std::vector<Complex> g_base;

  Complex f(std::size_t i, Complex coeff) const { return h[i] + std::conj(coeff * g_base[i]); }
  std::vector<Complex> f_values(Complex coeff) const {
    std::vector<Complex> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(i, coeff);
    return out;
  }
};

inline SampledParts sample_circle(const HarmonicMap& f, double r, int n) {
  SampledParts s;
  s.points.resize(n);
  for (int j = 0; j < n; ++j) s.points[j] = circle_node(r, j, n);
  s.h = analytic_on_circle(f.h(), r, n);
  s.g_base = g_base_on_circle(f, r, n);
  return s;
}

/// Polar grid: radii r (j+1)/radial_m for j < radial_m, angles 2 pi k / angular_m.
/// Point (j, k) has index j * angular_m + k.
struct PolarGrid {
  double r = 0.995;
  int radial_m = 256;
  int angular_m = 1024;

  std::vector<double> radii() const {
    std::vector<double> out(radial_m);
    for (int j = 0; j < radial_m; ++j) out[j] = r * (j + 1) / radial_m;
    return out;
  }
  Complex point(int j, int k) const { return std::polar(r * (j + 1) / radial_m, kTwoPi * k / angular_m); }
  double spacing() const { return std::max(r / radial_m, kTwoPi * r / angular_m); }
};

inline SampledParts sample_grid(const HarmonicMap& f, const PolarGrid& grid) {
  require_radius(grid.r);
  const std::size_t total = static_cast<std::size_t>(grid.radial_m) * grid.angular_m;
  SampledParts s;
  s.points.resize(total);
  s.h.resize(total);
  s.g_base.resize(total);
  const auto radii = grid.radii();
  auto hd = [&f](Complex w) { return f.h().derivative(w); };
  auto gd = [&f](Complex w) { return f.g_base_derivative(w); };
  for (int k = 0; k < grid.angular_m; ++k) {
    const double angle = kTwoPi * k / grid.angular_m;
    std::vector<Complex> hv, gv;
    if (f.h().has_closed_value()) {
      hv.resize(radii.size());
      for (std::size_t j = 0; j < radii.size(); ++j) hv[j] = f.h().closed_value(std::polar(radii[j], angle));
    } else {
      hv = accumulate_on_ray(hd, angle, radii);
    }
    if (f.omega().coefficient() == Complex{0.0, 0.0}) {
      gv.assign(radii.size(), Complex{0.0, 0.0});
    } else if (f.g_base_closed()) {
      gv.resize(radii.size());
      for (std::size_t j = 0; j < radii.size(); ++j)
        gv[j] = f.g_base_closed()->closed_value(std::polar(radii[j], angle));
    } else {
      gv = accumulate_on_ray(gd, angle, radii);
    }
    for (int j = 0; j < grid.radial_m; ++j) {
      const std::size_t idx = static_cast<std::size_t>(j) * grid.angular_m + k;
      s.points[idx] = std::polar(radii[j], angle);
      s.h[idx] = hv[j];
      s.g_base[idx] = gv[j];
    }
  }
  return s;
}

}  // namespace harmap
