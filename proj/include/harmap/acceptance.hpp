#pragma once

// The twelve acceptance criteria as one battery. Each criterion reports a
// pass flag, a one-line detail with the measured numbers, and its runtime.
// Tolerances are fixed here, not configurable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "harmap/alexander.hpp"
#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "harmap/means.hpp"
#include "harmap/parallel.hpp"
#include "harmap/render.hpp"
#include "harmap/univalence.hpp"

namespace harmap::acceptance {

struct Outcome {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

namespace detail {

inline std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

inline const CheckGrid kGrid{0.99, 2048};
constexpr int kEps = 32;

// Minimum Lemma A margin over a list of (h, omega) work units.
struct Sweep {
  int failures = 0;
  int total = 0;
  double worst = std::numeric_limits<double>::infinity();
};

inline Sweep lemma_a_sweep(const std::vector<std::pair<AnalyticMap, Dilatation>>& units) {
  const auto margins = parallel_map(units.size(), [&](std::size_t i) {
    return lemma_a_from_jets(circle_jets(units[i].first, kGrid), units[i].second, kEps).margin;
  });
  Sweep s;
  for (double m : margins) {
    ++s.total;
    s.worst = std::min(s.worst, m);
    if (!(m > -kPassSlack)) ++s.failures;
  }
  return s;
}

}  // namespace detail

inline Outcome means_identity() {
  double worst = 0.0;
  for (double r : {0.3, 0.6, 0.9}) worst = std::max(worst, std::abs(integral_mean(h0_map(), 1.0 / 3.0, r, 2048) - (1.0 + r * r)));
  return {1, "integral means identity I_1/3(r,h0) = 1 + r^2", worst <= 1e-10, detail::fmt("max error %.3e (tol 1e-10)", worst)};
}

inline Outcome bound_values() {
  const double b1 = theorem2_bound(1.0 / 3.0), b2 = theorem2_bound(0.5);
  const double e1 = std::abs(b1 - 2.0), e2 = std::abs(b2 - 32.0 / (3.0 * kPi));
  const double q1 = std::abs(beta_function(1.5, 0.5) - beta_by_quadrature(1.5, 0.5));
  const double q2 = std::abs(beta_function(2.0, 0.5) - beta_by_quadrature(2.0, 0.5));
  const bool ok = e1 <= 1e-12 && e2 <= 1e-12 && q1 <= 1e-9 && q2 <= 1e-9;
  return {2, "Euler-Beta bound values", ok,
          detail::fmt("|b(1/3)-2| %.1e, |b(1/2)-32/3pi| %.1e, oracle %.1e / %.1e", e1, e2, q1, q2)};
}

inline Outcome sharpness() {
  const auto m = means_result(h0_map(), 1.0 / 3.0, 0.999);
  return {3, "bound is sharp along h0", m.value >= 1.998 && m.slack <= 0.002,
          detail::fmt("I(0.999) = %.9f, slack %.3e", m.value, m.slack)};
}

inline Outcome bound_sweep(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<AnalyticMap> hs;
  for (int i = 0; i < 200; ++i) hs.push_back(AnalyticMap::from_derivative(gen.kbeta(-0.5)));
  const std::vector<double> betas{0.25, 1.0 / 3.0, 0.5, 1.0}, radii{0.5, 0.9, 0.99};
  const auto worst_slack = parallel_map(hs.size(), [&](std::size_t i) {
    double w = std::numeric_limits<double>::infinity();
    for (double b : betas)
      for (double r : radii) w = std::min(w, means_result(hs[i], b, r).slack);
    return w;
  });
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (double w : worst_slack) {
    worst = std::min(worst, w);
    if (w < -1e-9) ++violations;
  }
  return {4, "bound holds on 200 random K(-1/2) members", violations == 0,
          detail::fmt("%g violations in 2400 means, min slack %.4e", violations, worst)};
}

inline Outcome bl1(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<std::pair<AnalyticMap, Dilatation>> units;
  for (int i = 0; i < 50; ++i) {
    AnalyticMap h = AnalyticMap::from_derivative(gen.kbeta(-0.5));
    for (int t = 0; t < 8; ++t) units.emplace_back(h, Dilatation::rotation(kTwoPi * t / 8));
  }
  const auto s = detail::lemma_a_sweep(units);
  return {5, "K(-1/2) with omega = e^{i theta} z is close-to-convex", s.failures == 0,
          detail::fmt("%g/%g failures, min margin %.4e", s.failures, s.total, s.worst)};
}

inline Outcome bl2(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<std::pair<AnalyticMap, Dilatation>> units;
  for (double beta : {-0.4, -0.25, -0.1, 0.0})
    for (int i = 0; i < 50; ++i)
      units.emplace_back(AnalyticMap::from_derivative(gen.kbeta(beta)),
                         Dilatation::scaled_rotation(std::cos(beta * kPi) - 1e-3, gen.angle()));
  const auto s = detail::lemma_a_sweep(units);
  return {6, "K(beta) with |omega| < cos(beta pi) is close-to-convex", s.failures == 0,
          detail::fmt("%g/%g failures, min margin %.4e", s.failures, s.total, s.worst)};
}

inline Outcome ap_sweeps(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<std::pair<AnalyticMap, Dilatation>> co, vk, g;
  for (double alpha : {1.25, 1.5, 1.75})
    for (int i = 0; i < 50; ++i)
      co.emplace_back(AnalyticMap::from_derivative(gen.co_alpha(alpha)),
                      Dilatation::scaled_rotation(std::sin((2.0 - alpha) * kPi / 2.0) - 1e-3, gen.angle()));
  double worst_rotation_excess = -std::numeric_limits<double>::infinity();
  for (double delta : {0.5, 1.0, 1.5})
    for (int i = 0; i < 50; ++i) {
      AnalyticMap h = AnalyticMap::from_derivative(gen.vk(4.0 - delta));
      worst_rotation_excess =
          std::max(worst_rotation_excess, boundary_rotation(h, {0.99, 8192}) - (4.0 - delta) * kPi);
      vk.emplace_back(h, Dilatation::scaled_rotation(std::sin(delta * kPi / 4.0) - 1e-3, gen.angle()));
    }
  for (int n : {1, 2, 3})
    for (int i = 0; i < 50; ++i)
      g.emplace_back(AnalyticMap::from_derivative(gen.class_g()),
                     Dilatation::monomial(std::polar(1.0 / (n + 1), gen.angle()), n));
  const auto a3 = detail::lemma_a_sweep(co), a4 = detail::lemma_a_sweep(vk), a5 = detail::lemma_a_sweep(g);
  const double br = boundary_rotation(g_k_map(3.0), {0.99, 8192});
  const bool ok = a3.failures + a4.failures + a5.failures == 0 && br >= 2.9 * kPi && br <= 3.0 * kPi + 0.01 &&
                  worst_rotation_excess <= 1e-2;
  return {7, "CO(alpha), V_K and G sweeps; boundary rotation of g_3", ok,
          detail::fmt("failures %g/%g/%g; BR(g_3)/pi = %.5f", a3.failures, a4.failures, a5.failures, br / kPi) +
              detail::fmt("; max BR - K pi over V_K = %.3e", worst_rotation_excess)};
}

inline Outcome pinchuk() {
  int bad = 0;
  std::string which;
  for (double k : {2.5, 3.0, 3.5}) {
    if (!covering_check(builtin("gK", {k}), 0.999, 0.95 / k, 16)) {
      ++bad;
      which += detail::fmt(" K=%.1f", k);
    }
  }
  return {8, "g_K covers the disk of radius 0.95/K", bad == 0,
          bad == 0 ? "winding 1 at 16 probes for K = 2.5, 3, 3.5" : "winding != 1 for" + which};
}

inline Outcome figure1_collisions() {
  struct Case {
    double lambda;
    bool expect;
  };
  const std::vector<Case> cases{{5.0 / 9.0, true}, {0.9, true}, {0.2, false}, {0.5, false}};
  const auto reports = parallel_map(cases.size(), [&](std::size_t i) {
    return grid_injectivity(f1_map({cases[i].lambda, 0.0}), PolarGrid{});
  });
  bool ok = true;
  std::string text;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& r = reports[i];
    const bool good = cases[i].expect ? r.certified : !r.found;
    ok = ok && good;
    text += (i ? "; " : "") + detail::fmt("lambda=%.4f: ", cases[i].lambda) + r.tag() +
              detail::fmt(" (%g confirmed, %g refuted)", r.confirmed, r.refuted);
  }
  return {9, "Figure 1 collisions at lambda = 5/9, 9/10 only", ok, text};
}

inline Outcome alexander() {
  const auto series = taylor_coefficients([](Complex z) { return z / (1.0 - z); }, 50, 0.95);
  const auto t = alexander_transform(series, TaylorSeries{std::vector<Complex>(50), 0.95});
  double err = 0.0;
  for (int k = 1; k <= 50; ++k) err = std::max(err, std::abs(t.H.at(k) - 1.0 / k));

  const AnalyticMap half = AnalyticMap::from_value_product(build_starlike(0.5, {{UnitPoint(0.0), 1.0}}));
  AlexOptions a;
  a.lambdas = {{1.0, 0.0}};
  const auto ra = alex_ctc_check(HarmonicMap(half, Dilatation::scaled_rotation(0.5, 0.0)), a);
  AlexOptions b;
  b.lambdas = {{0.0, 0.0}};
  const auto rb = alex_ctc_check(HarmonicMap(half, Dilatation::scaled_rotation(0.5, 0.0)), b);
  InstanceGenerator gen(7);
  AlexOptions c;
  c.starlike_order = -0.25;
  c.lambdas = lambda_samples(42, true);
  const auto rc = alex_ctc_check(
      HarmonicMap(AnalyticMap::from_value_product(gen.starlike(-0.25)),
                  Dilatation::scaled_rotation(std::cos(0.25 * kPi) - 1e-3, gen.angle())),
      c);
  auto worst = [](const AlexResult& r) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& x : r.reports) m = std::min(m, x.margin);
    return m;
  };
  const bool ok = err <= 1e-10 && ra.pass() && rb.pass() && rc.pass();
  return {10, "Alexander transform and F_lambda close-to-convexity", ok,
          detail::fmt("coef err %.2e; margins %.4f / %.4f / %.4f", err, worst(ra), worst(rb), worst(rc))};
}

inline Outcome oracles(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<ProductDerivative> ps;
  for (int i = 0; i < 5; ++i) {
    ps.push_back(gen.kbeta(gen.uniform(-0.5, 0.9)));
    ps.push_back(gen.vk(gen.uniform(2.0, 4.0)));
    ps.push_back(gen.co_alpha(gen.uniform(1.05, 1.95)));
    ps.push_back(gen.class_g());
  }
  double fd_err = 0.0;
  const double step = 1e-5;
  for (const auto& p : ps)
    for (int k = 0; k < 50; ++k) {
      const Complex z = std::polar(0.9 * std::sqrt(gen.uniform(0.0, 1.0)), gen.angle());
      const Complex fd = (p.log_value(z + step) - p.log_value(z - step)) / (2.0 * step);
      const Complex exact = p.log_derivative(z);
      fd_err = std::max(fd_err, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
    }
  double q_err = 0.0;
  const AnalyticMap h0q = AnalyticMap::from_derivative(h0_product());
  const AnalyticMap convex = AnalyticMap::from_derivative(build_kbeta(0.0, {{UnitPoint(0.0), 1.0}}));
  const AnalyticMap h1q = AnalyticMap::from_derivative(h1_product());
  for (int k = 0; k < 50; ++k) {
    const Complex z = std::polar(0.95 * std::sqrt(gen.uniform(0.0, 1.0)), gen.angle());
    q_err = std::max(q_err, std::abs(h0q.value(z) - h0_map().closed_value(z)));
    q_err = std::max(q_err, std::abs(convex.value(z) - z / (1.0 - z)));
    q_err = std::max(q_err, std::abs(h1q.value(z) - h1_map().closed_value(z)));
  }
  return {11, "pre-Schwarzian and antiderivative oracles", fd_err <= 1e-6 && q_err <= 1e-10,
          detail::fmt("finite-difference err %.2e, quadrature err %.2e", fd_err, q_err)};
}

inline Outcome figure_regression() {
  auto specs = figure1_specs();
  for (auto& s : figure2_specs()) specs.push_back(std::move(s));
  const auto first = parallel_map(specs.size(), [&](std::size_t i) {
    const auto fam = sample_curves(specs[i].map);
    return std::pair{vertex_hash(fam), svg_document(fam)};
  });
  const auto second = parallel_map(specs.size(), [&](std::size_t i) {
    const auto fam = sample_curves(specs[i].map);
    return std::pair{vertex_hash(fam), svg_document(fam)};
  });
  int unstable = 0;
  for (std::size_t i = 0; i < specs.size(); ++i)
    if (first[i] != second[i]) ++unstable;
  return {12, "figure vertex hashes are byte-stable", unstable == 0,
          detail::fmt("%g figures, %g unstable", static_cast<double>(specs.size()), unstable)};
}

using Criterion = std::pair<int, std::function<Outcome()>>;

inline std::vector<Criterion> battery(std::uint64_t seed = 42) {
  return {{1, means_identity},
          {2, bound_values},
          {3, sharpness},
          {4, [seed] { return bound_sweep(seed); }},
          {5, [seed] { return bl1(seed); }},
          {6, [seed] { return bl2(seed); }},
          {7, [seed] { return ap_sweeps(seed); }},
          {8, pinchuk},
          {9, figure1_collisions},
          {10, alexander},
          {11, [seed] { return oracles(seed); }},
          {12, figure_regression}};
}

/// Runtime ceilings (seconds) per criterion id; 0 means none.
inline double time_limit(int id) {
  switch (id) {
    case 1: return 1.0;
    case 4: return 60.0;
    case 9: return 30.0;
    default: return 0.0;
  }
}

inline Outcome run_timed(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.second();
  } catch (const std::exception& e) {
    o.id = c.first;
    o.name = "criterion " + std::to_string(c.first);
    o.pass = false;
    o.detail = std::string("error: ") + e.what();
  }
  o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (const double limit = time_limit(o.id); limit > 0.0 && o.seconds > limit) {
    o.pass = false;
    o.detail += detail::fmt(" [%.1fs over %.0fs limit]", o.seconds, limit);
  }
  return o;
}

}  // namespace harmap::acceptance
