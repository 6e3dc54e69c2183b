#pragma once

// Taylor coefficients by the discrete Cauchy formula, the Alexander-type
// transform zH' = h, zG' = -g, and the close-to-convexity checks for
// F_lambda = H + lambda conj(G).

#include <limits>
#include <random>
#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "harmap/sampling.hpp"

namespace harmap {

/// a_1 ... a_N of a function vanishing at 0; a_0 = 0 is implicit.
struct TaylorSeries {
  std::vector<Complex> coefficients;  // coefficients[k - 1] = a_k
  double sample_radius = 0.0;

  int size() const { return static_cast<int>(coefficients.size()); }
  Complex at(int k) const { return k >= 1 && k <= size() ? coefficients[k - 1] : Complex{0.0, 0.0}; }

  Complex operator()(Complex z) const {
    Complex s{0.0, 0.0};
    for (int k = size(); k >= 1; --k) s = (s + coefficients[k - 1]) * z;
    return s;
  }

  /// Geometric estimate of sum_{k > N} |a_k| rho^k from the last 16 terms.
  double tail_bound(double rho = 0.99) const {
    const int n = size();
    if (n < 2) return std::numeric_limits<double>::infinity();
    const int first = std::max(1, n - 15);
    // Fit |a_k| ~ C q^k through the end points of the window.
    const double a0 = std::abs(at(first)), a1 = std::abs(at(n));
    if (a1 == 0.0) return 0.0;
    if (a0 == 0.0) return std::numeric_limits<double>::infinity();
    const double q = std::pow(a1 / a0, 1.0 / std::max(1, n - first)) * rho;
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    return a1 * std::pow(rho, n) * q / (1.0 - q);
  }
};

/// a_k = (1/m) sum_j fun(rho w^j) w^{-jk} / rho^k, w = e^{2 pi i/m}, starting
/// from m = max(8N, 64) and doubling until a_1..a_N move by at most 1e-10 relative to
/// max(1, |a_k|). Rounding in the samples is amplified by rho^{-k}, so moves
/// below that floor (64 eps max|fun| / rho^k) also count as stable; pick rho
/// near 1 when high coefficients must be accurate.
template <typename F>
TaylorSeries taylor_coefficients(const F& fun, int n, double rho, int doublings = 6) {
  if (n < 1 || n > 512) throw Error(ErrorCode::domain, "series length must lie in [1, 512]");
  if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::radius, "extraction radius must lie in (0, 1)");
  double peak = 0.0;
  auto extract = [&](int m) {
    std::vector<Complex> samples(m);
    for (int j = 0; j < m; ++j) {
      samples[j] = fun(circle_node(rho, j, m));
      require_finite(samples[j], "series sample");
      peak = std::max(peak, std::abs(samples[j]));
    }
    std::vector<Complex> a(n);
    for (int k = 1; k <= n; ++k) {
      Complex s{0.0, 0.0};
      for (int j = 0; j < m; ++j)
        s += samples[j] * std::polar(1.0, -kTwoPi * static_cast<double>((static_cast<long long>(j) * k) % m) / m);
      a[k - 1] = s / (static_cast<double>(m) * std::pow(rho, k));
    }
    return a;
  };
  int m = std::max(8 * n, 64);
  auto prev = extract(m);
  for (int d = 0; d < doublings; ++d) {
    m *= 2;
    auto next = extract(m);
    bool stable = true;
    for (int k = 1; k <= n && stable; ++k) {
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * peak / std::pow(rho, k);
      stable = std::abs(next[k - 1] - prev[k - 1]) <= 1e-10 * std::max(1.0, std::abs(next[k - 1])) + floor;
    }
    if (stable) return {std::move(next), rho};
    prev = std::move(next);
  }
  throw Error(ErrorCode::non_convergence, "Taylor coefficients did not stabilise under doubling");
}

/// Exact coefficients p_0..p_{N-1} of prod (1 - conj(x_k) z)^{e_k}, from the
/// recurrence (j+1) p_{j+1} = sum_{i <= j} p_i c_{j-i} with
/// c_j = -sum_k e_k conj(x_k)^{j+1} the coefficients of the log derivative.
inline std::vector<Complex> product_series(const ProductDerivative& p, int n) {
  std::vector<Complex> c(n, Complex{0.0, 0.0}), out(n, Complex{0.0, 0.0});
  for (const auto& f : p.factors()) {
    Complex xb = f.atom.conj_value(), pw = xb;
    for (int j = 0; j < n; ++j) {
      c[j] -= f.exponent * pw;
      pw *= xb;
    }
  }
  if (n > 0) out[0] = 1.0;
  for (int j = 0; j + 1 < n; ++j) {
    Complex s{0.0, 0.0};
    for (int i = 0; i <= j; ++i) s += out[i] * c[j - i];
    out[j + 1] = s / static_cast<double>(j + 1);
  }
  return out;
}

/// Taylor series of h from a product form: h' = P (derivative product) or
/// h = z P (value product).
inline TaylorSeries exact_series(const AnalyticMap& h, int n) {
  const auto* p = h.product();
  if (p == nullptr) throw Error(ErrorCode::domain, "exact series needs a product representation");
  const auto c = product_series(*p, n);
  TaylorSeries s;
  s.coefficients.resize(n);
  for (int k = 1; k <= n; ++k)
    s.coefficients[k - 1] = h.form() == AnalyticMap::Form::value_product ? c[k - 1] : c[k - 1] / static_cast<double>(k);
  return s;
}

struct AlexanderPair {
  TaylorSeries H;
  TaylorSeries G;
};

/// H_k = h_k / k and G_k = -g_k / k.
inline AlexanderPair alexander_transform(const TaylorSeries& h, const TaylorSeries& g) {
  AlexanderPair out{h, g};
  for (int k = 1; k <= h.size(); ++k) out.H.coefficients[k - 1] = h.at(k) / static_cast<double>(k);
  for (int k = 1; k <= g.size(); ++k) out.G.coefficients[k - 1] = -g.at(k) / static_cast<double>(k);
  return out;
}

/// Default lambda sample: 0, +-1, +-i and `random_count` seeded points of the
/// closed disk (or of the circle when unit_only, where 0 is dropped).
inline std::vector<Complex> lambda_samples(std::uint64_t seed, bool unit_only = false, int random_count = 8) {
  std::vector<Complex> out;
  if (!unit_only) out.push_back({0.0, 0.0});
  for (Complex c : {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, Complex{0, -1}}) out.push_back(c);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < random_count; ++i) {
    const double angle = kTwoPi * u(rng);
    const double mod = unit_only ? 1.0 : std::sqrt(u(rng));
    out.push_back(std::polar(mod, angle));
  }
  return out;
}

struct AlexOptions {
  CheckGrid grid{0.99, 2048};
  int eps_count = 32;
  double starlike_order = 0.0;  // pre-check threshold: h in S*(beta)
  std::vector<Complex> lambdas = lambda_samples(42);
};

struct AlexResult {
  CheckReport starlike;                // pre-check on h
  double sense_margin = 0.0;           // 1 - max |g/h| on the circle
  std::vector<Complex> lambdas;
  std::vector<CheckReport> reports;    // one per lambda

  bool pass(double slack = kPassSlack) const {
    if (!(sense_margin > 0.0)) return false;
    for (const auto& r : reports)
      if (!r.pass(slack)) return false;
    return true;
  }
};

/// Checks F_lambda = H + lambda conj(G) for each sampled lambda. With
/// H' = h/z and G' = -g/z, F = H + eps conj(lambda) G has
/// 1 + z F''/F' = z h' (1 - e omega) / (h - e g), e = eps conj(lambda); the
/// Kaplan margin of that integrand is swept over |eps| = 1. For lambda = 0
/// the report is the convexity order of H, i.e. min Re(z h'/h).
inline AlexResult alex_ctc_check(const HarmonicMap& f, const AlexOptions& opt = {}) {
  require_grid(opt.grid);
  AlexResult res;
  res.starlike = starlike_order(f.h(), CheckGrid{std::max(opt.grid.r, 0.99), std::max(opt.grid.n, 2048)},
                                opt.starlike_order);
  if (!(res.starlike.margin > -kPassSlack))
    throw Error(ErrorCode::hypothesis_violation, "h fails the starlikeness pre-check");
  if (!(f.omega().sup_norm() < 1.0)) throw Error(ErrorCode::hypothesis_violation, "dilatation must have sup norm < 1");

  const int n = opt.grid.n;
  const auto parts = sample_circle(f, opt.grid.r, n);
  const Complex coeff = f.omega().coefficient();
  std::vector<Complex> g(n), zh(n), w(n);
  double worst_ratio = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex z = parts.points[j];
    g[j] = coeff * parts.g_base[j];
    zh[j] = z * f.h().derivative(z);
    w[j] = f.omega()(z);
    worst_ratio = std::max(worst_ratio, std::abs(g[j] / parts.h[j]));
  }
  // g/h is analytic with |g/h| -> 0 at 0, so the circle carries its maximum.
  res.sense_margin = 1.0 - worst_ratio;

  std::vector<double> q(n);
  for (Complex lambda : opt.lambdas) {
    CheckReport rep;
    if (lambda == Complex{0.0, 0.0}) {
      double best = std::numeric_limits<double>::infinity();
      int where = 0;
      for (int j = 0; j < n; ++j) {
        const double v = (zh[j] / parts.h[j]).real();
        if (v < best) best = v, where = j;
      }
      rep = {"alex_convexity", best - opt.starlike_order, opt.grid.r, n, parts.points[where], std::nullopt, best};
    } else {
      rep.margin = std::numeric_limits<double>::infinity();
      for (int e = 0; e < opt.eps_count; ++e) {
        const Complex eps = std::polar(1.0, kTwoPi * e / opt.eps_count) * std::conj(lambda);
        for (int j = 0; j < n; ++j) {
          const Complex denom = parts.h[j] - eps * g[j];
          if (std::abs(denom) <= 1e-12) throw Error(ErrorCode::vanishing_derivative, "F_lambda' vanishes on the grid");
          q[j] = (zh[j] * (1.0 - eps * w[j]) / denom).real();
        }
        const auto k = kaplan_from_samples(q);
        if (k.margin < rep.margin)
          rep = {"alex_ctc", k.margin, opt.grid.r, n, parts.points[k.arc_start], kTwoPi * e / opt.eps_count, k.min_arc};
      }
    }
    res.lambdas.push_back(lambda);
    res.reports.push_back(rep);
  }
  return res;
}

}  // namespace harmap
