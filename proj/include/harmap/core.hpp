#pragma once

// Numeric kernel: branch-safe complex powers, Gauss-Legendre contour
// quadrature, periodic trapezoid means and the Euler Beta function.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "harmap/errors.hpp"

namespace harmap {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest modulus at which any representation is evaluated; every family
/// has singularities on the unit circle.
inline constexpr double kMaxRadius = 1.0 - 1e-6;

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw Error(ErrorCode::domain, std::string(what) + " is not finite");
}

inline void require_radius(Complex z, double max_radius = kMaxRadius) {
  if (!(std::abs(z) <= max_radius))
    throw Error(ErrorCode::radius, "|z| = " + std::to_string(std::abs(z)) + " exceeds " +
                                       std::to_string(max_radius));
}

inline void require_radius(double r, double max_radius = kMaxRadius) {
  if (!(r >= 0.0 && r <= max_radius))
    throw Error(ErrorCode::radius, "radius " + std::to_string(r) + " outside [0, " +
                                       std::to_string(max_radius) + "]");
}

/// A point on the unit circle, stored by angle so that |x| = 1 holds exactly.
class UnitPoint {
 public:
  constexpr UnitPoint() = default;
  explicit UnitPoint(double angle) : angle_(normalize(angle)) {}

  double angle() const { return angle_; }
  Complex value() const { return {std::cos(angle_), std::sin(angle_)}; }
  Complex conj_value() const { return {std::cos(angle_), -std::sin(angle_)}; }
  bool is_one() const { return angle_ == 0.0; }

  UnitPoint rotated(double by) const { return UnitPoint(angle_ + by); }

  friend bool operator==(const UnitPoint&, const UnitPoint&) = default;

 private:
  static double normalize(double a) {
    if (!std::isfinite(a)) throw Error(ErrorCode::domain, "atom angle is not finite");
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
  }

  double angle_ = 0.0;
};

/// exp(a Log w) with the principal logarithm; requires Re w > 0.
inline Complex principal_power(Complex w, double a) {
  require_finite(w, "power base");
  if (!(w.real() > 0.0)) throw Error(ErrorCode::domain, "power base outside right half-plane");
  if (w == Complex(1.0, 0.0)) return {1.0, 0.0};
  return std::exp(a * std::log(w));
}

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace detail

/// Cached n-point Gauss-Legendre rule on [-1, 1]. Thread-safe.
inline const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::domain, "Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(detail::compute_gauss_rule(n));
  return *slot;
}

struct QuadratureOptions {
  int start_nodes = 32;
  int max_nodes = 4096;
  double tolerance = 1e-11;
};

namespace detail {

// Points t in [0, 1] splitting the segment a + t(b - a) so that each piece is
// no longer than its distance to the unit circle; Gauss-Legendre then
// converges geometrically on every piece.
inline std::vector<double> graded_breaks(Complex a, Complex b) {
  std::vector<double> breaks{0.0};
  const double len = std::abs(b - a);
  if (len == 0.0) {
    breaks.push_back(1.0);
    return breaks;
  }
  double t = 0.0;
  while (t < 1.0) {
    // |a + t(b - a)| is convex in t, so a piece of length (1 - |p|)/2 stays
    // at least its own length away from the circle.
    double dist = std::max(1.0 - std::abs(a + t * (b - a)), 1e-7);
    double next = std::min(1.0, t + std::max(0.5 * dist / len, 1e-4));
    if (next >= 1.0 - 1e-12) next = 1.0;
    breaks.push_back(next);
    t = next;
  }
  return breaks;
}

template <typename F>
Complex composite_gauss(const F& dfun, Complex a, Complex b, const std::vector<double>& breaks,
                        int n) {
  const GaussRule& rule = gauss_legendre(n);
  const Complex d = b - a;
  Complex total{0.0, 0.0};
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double t0 = breaks[p], t1 = breaks[p + 1];
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    Complex piece{0.0, 0.0};
    for (int i = 0; i < n; ++i) piece += rule.weights[i] * dfun(a + (mid + half * rule.nodes[i]) * d);
    total += half * piece;
  }
  return total * d;
}

}  // namespace detail

/// Integral of an analytic derivative along the straight segment [a, b]
/// (both inside the unit disk), with node doubling until the composite
/// Gauss-Legendre value is stable to the configured tolerance.
template <typename F>
Complex integrate_segment(const F& dfun, Complex a, Complex b, const QuadratureOptions& opt = {}) {
  require_finite(a, "segment start");
  require_finite(b, "segment end");
  if (a == b) return {0.0, 0.0};
  const auto breaks = detail::graded_breaks(a, b);
  int n = opt.start_nodes;
  Complex prev = detail::composite_gauss(dfun, a, b, breaks, n);
  while (2 * n <= opt.max_nodes) {
    n *= 2;
    Complex next = detail::composite_gauss(dfun, a, b, breaks, n);
    if (std::abs(next - prev) <= opt.tolerance * std::max(1.0, std::abs(next))) return next;
    prev = next;
  }
  throw Error(ErrorCode::non_convergence,
              "segment quadrature did not stabilise within " + std::to_string(opt.max_nodes) + " nodes");
}

/// h(z) = integral over t in [0, 1] of z h'(tz), for h' analytic on [0, z].
template <typename F>
Complex antiderivative_on_segment(const F& dfun, Complex z, int nodes = 32) {
  QuadratureOptions opt;
  opt.start_nodes = nodes;
  return integrate_segment(dfun, Complex{0.0, 0.0}, z, opt);
}

/// Mean over n equispaced angles of a 2 pi-periodic function; exact for
/// trigonometric polynomials of degree below n.
template <typename F>
double circle_mean(const F& fun, int n) {
  if (n < 1) throw Error(ErrorCode::domain, "circle_mean needs n >= 1");
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += fun(kTwoPi * j / n);
  return sum / n;
}

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::domain, "log_gamma needs a positive argument");
  return std::lgamma(x);
}

inline double beta_function(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::domain, "Beta function needs a, b > 0");
  return std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
}

}  // namespace harmap
