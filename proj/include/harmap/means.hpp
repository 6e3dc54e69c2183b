#pragma once

// Integral means I_beta(r, h) = (1/2 pi) int |h'(r e^{it})|^{-2 beta} dt and
// the Euler-Beta bound 2^{6 beta}/pi B((6 beta + 1)/2, 1/2) for K(-1/2).

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"

namespace harmap {

inline constexpr double kMaxMeanExponent = 4.0;

inline void require_mean_exponent(double beta) {
  if (!(beta > 0.0 && beta <= kMaxMeanExponent)) throw Error(ErrorCode::domain, "beta must lie in (0, 4]");
}

/// Default node count: the integrand's Fourier decay slows near |z| = 1.
inline int default_mean_nodes(double r) { return r > 0.99 ? 8192 : 1024; }

inline double integral_mean(const AnalyticMap& h, double beta, double r, int n = 0) {
  require_mean_exponent(beta);
  require_radius(r);
  if (n == 0) n = default_mean_nodes(r);
  if (n < 16) throw Error(ErrorCode::domain, "integral_mean needs n >= 16");
  if (const auto* p = h.product(); p && h.form() == AnalyticMap::Form::derivative_product)
    return circle_mean([&](double t) { return p->abs_power(std::polar(r, t), -2.0 * beta); }, n);
  return circle_mean([&](double t) { return std::pow(std::abs(h.derivative(std::polar(r, t))), -2.0 * beta); }, n);
}

inline double theorem2_bound(double beta) {
  require_mean_exponent(beta);
  return std::exp2(6.0 * beta) / kPi * beta_function((6.0 * beta + 1.0) / 2.0, 0.5);
}

/// Right side of the averaging step in the proof of the bound:
/// sum t_k * mean |1 - r e^{i(t - t_k)}|^{6 beta}, for a K(-1/2) product.
inline double averaged_atom_mean(const ProductDerivative& h, double beta, double r, int n) {
  if (h.label().kind != ClassKind::kbeta) throw Error(ErrorCode::domain, "averaging step needs a K(beta) product");
  const double scale = -2.0 * (1.0 - h.label().parameter);
  const double single = circle_mean([&](double t) { return std::pow(std::abs(1.0 - std::polar(r, t)), 6.0 * beta); }, n);
  // Every atom contributes the same rotated mean; weights sum to one.
  double total = 0.0;
  for (const auto& f : h.factors()) total += (f.exponent / scale) * single;
  return total;
}

/// Independent check of B(a, b): the integral of t^{a-1} (1-t)^{b-1} split
/// at 1/2, with t = s^2 on the left and 1 - t = s^2 on the right so both
/// endpoint singularities disappear for a, b >= 1/2.
inline double beta_by_quadrature(double a, double b) {
  if (!(a >= 0.5) || !(b >= 0.5)) throw Error(ErrorCode::domain, "quadrature oracle needs a, b >= 1/2");
  auto piece = [](double p, double q) {
    auto d = [p, q](Complex s) {
      const double x = s.real();
      return Complex{2.0 * std::pow(x, 2.0 * p - 1.0) * std::pow(1.0 - x * x, q - 1.0), 0.0};
    };
    return integrate_segment(d, Complex{0.0, 0.0}, Complex{std::sqrt(0.5), 0.0}).real();
  };
  return piece(a, b) + piece(b, a);
}

struct MeansResult {
  double beta = 0.0;
  double r = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
};

inline MeansResult means_result(const AnalyticMap& h, double beta, double r, int n = 0) {
  MeansResult m{beta, r, integral_mean(h, beta, r, n), theorem2_bound(beta), 0.0};
  m.slack = m.bound - m.value;
  return m;
}

/// I_beta(r, h0) along increasing radii; the values climb towards the bound.
inline std::vector<MeansResult> sharpness_scan(double beta, const std::vector<double>& radii, int n = 0) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw Error(ErrorCode::domain, "radii must be increasing");
  std::vector<MeansResult> out;
  const auto h0 = h0_map();
  for (double r : radii) out.push_back(means_result(h0, beta, r, n));
  return out;
}

inline void write_means_csv(std::ostream& os, const std::vector<MeansResult>& rows) {
  os << "beta,r,value,bound,slack\n";
  char buf[160];
  for (const auto& m : rows) {
    std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g,%.15g\n", m.beta, m.r, m.value, m.bound, m.slack);
    os << buf;
  }
}

}  // namespace harmap
