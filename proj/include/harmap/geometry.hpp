#pragma once

// Grid checks of the geometric hypotheses: order of convexity and
// starlikeness, boundary rotation, Kaplan's arc condition, explicit
// close-to-convexity certificates against a starlike comparison function,
// and the epsilon sweep that lifts analytic close-to-convexity of h + eps g
// to the harmonic map h + conj(g).

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"
#include "harmap/sampling.hpp"
#include "harmap/winding.hpp"

namespace harmap {

/// Checks pass when margin > -kPassSlack; the slack absorbs quadrature error.
inline constexpr double kPassSlack = 1e-6;

struct CheckReport {
  std::string name;
  double margin = 0.0;
  double r = 0.0;
  int grid_n = 0;
  std::optional<Complex> witness;
  std::optional<double> gamma;
  double extremum = 0.0;  // raw min or max behind the margin

  bool pass(double slack = kPassSlack) const { return margin > -slack; }
};

struct CheckGrid {
  double r = 0.99;
  int n = 2048;
};

inline void require_grid(const CheckGrid& g) {
  require_radius(g.r);
  if (!(g.r > 0.0)) throw Error(ErrorCode::radius, "check radius must be positive");
  if (g.n < 8) throw Error(ErrorCode::domain, "check grid needs n >= 8");
}

enum class Extremum { min, max };

/// Re(1 + z h''/h') on |z| = r. In min mode margin = min - beta (beta from
/// a K(beta) label, else 0); in max mode margin = bound - max (bound 3/2
/// for class G, else 0). `threshold` overrides either default.
inline CheckReport convexity_order(const AnalyticMap& h, const CheckGrid& grid, Extremum mode = Extremum::min,
                                   std::optional<double> threshold = std::nullopt) {
  require_grid(grid);
  double best = mode == Extremum::min ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
  Complex where{};
  for (int j = 0; j < grid.n; ++j) {
    const Complex z = circle_node(grid.r, j, grid.n);
    const double v = (1.0 + z * h.second_ratio(z)).real();
    if (mode == Extremum::min ? v < best : v > best) {
      best = v;
      where = z;
    }
  }
  CheckReport rep{"convexity_order", 0.0, grid.r, grid.n, where, std::nullopt, best};
  if (mode == Extremum::min) {
    double t = threshold.value_or(h.label().kind == ClassKind::kbeta ? h.label().parameter : 0.0);
    rep.margin = best - t;
  } else {
    double t = threshold.value_or(h.label().kind == ClassKind::class_g ? 1.5 : 0.0);
    rep.margin = t - best;
  }
  return rep;
}

/// min Re(z h'/h) on |z| = r minus the order (beta for S*(beta) labels,
/// else `threshold`, default 0).
inline CheckReport starlike_order(const AnalyticMap& h, const CheckGrid& grid,
                                  std::optional<double> threshold = std::nullopt) {
  require_grid(grid);
  const auto values = analytic_on_circle(h, grid.r, grid.n);
  double best = std::numeric_limits<double>::infinity();
  Complex where{};
  for (int j = 0; j < grid.n; ++j) {
    const Complex z = circle_node(grid.r, j, grid.n);
    if (std::abs(values[j]) < 1e-12) throw Error(ErrorCode::zero_of_function, "h vanishes on the check circle");
    const double v = (z * h.derivative(z) / values[j]).real();
    if (v < best) {
      best = v;
      where = z;
    }
  }
  double t = threshold.value_or(h.label().kind == ClassKind::starlike_beta ? h.label().parameter : 0.0);
  return {"starlike_order", best - t, grid.r, grid.n, where, std::nullopt, best};
}

/// Trapezoid value of the integral of |Re(1 + z h''/h')| over |z| = r.
inline double boundary_rotation(const AnalyticMap& h, const CheckGrid& grid) {
  require_grid(grid);
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const Complex z = circle_node(grid.r, j, grid.n);
    sum += std::abs((1.0 + z * h.second_ratio(z)).real());
  }
  return sum * kTwoPi / grid.n;
}

struct KaplanResult {
  double margin = 0.0;     // min(pi + min_arc, pi - |total - 2 pi|)
  double min_arc = 0.0;    // smallest trapezoid integral over an arc of length <= 2 pi
  double total = 0.0;      // integral over the whole circle
  int arc_start = 0;
  int arc_end = 0;
};

/// Kaplan's condition from samples q_j = Re(1 + z F''/F') at n equispaced
/// nodes: every arc integral must exceed -pi. Arc integrals are prefix-sum
/// differences over the doubled node array; the inner minimisation is a
/// sliding-window maximum, so the whole scan is O(n).
///
/// The full-circle integral equals 2 pi (1 + number of zeros of F' inside),
/// which the arc condition alone cannot see, so the margin is also capped
/// by pi - |total - 2 pi|.
inline KaplanResult kaplan_from_samples(std::span<const double> q) {
  const int n = static_cast<int>(q.size());
  const double step = kTwoPi / n;
  std::vector<double> prefix(2 * n + 1, 0.0);
  for (int k = 0; k < 2 * n; ++k) prefix[k + 1] = prefix[k] + 0.5 * step * (q[k % n] + q[(k + 1) % n]);
  KaplanResult res;
  res.total = prefix[n];
  res.min_arc = std::numeric_limits<double>::infinity();
  std::deque<int> window;  // indices with decreasing prefix values
  for (int j = 1; j <= 2 * n; ++j) {
    const int i = j - 1;
    while (!window.empty() && prefix[window.back()] <= prefix[i]) window.pop_back();
    window.push_back(i);
    while (window.front() < j - n) window.pop_front();
    const double arc = prefix[j] - prefix[window.front()];
    if (arc < res.min_arc) {
      res.min_arc = arc;
      res.arc_start = window.front() % n;
      res.arc_end = j % n;
    }
  }
  res.margin = std::min(kPi + res.min_arc, kPi - std::abs(res.total - kTwoPi));
  return res;
}

/// Derivative data of an analytic F on |z| = r: F' and z F''/F'.
struct CircleJets {
  double r = 0.0;
  std::vector<Complex> z;
  std::vector<Complex> derivative;
  std::vector<Complex> z_ratio;
};

template <typename Jet>
CircleJets circle_jets(const Jet& jet, const CheckGrid& grid) {
  require_grid(grid);
  CircleJets c;
  c.r = grid.r;
  c.z.resize(grid.n);
  c.derivative.resize(grid.n);
  c.z_ratio.resize(grid.n);
  for (int j = 0; j < grid.n; ++j) {
    const Complex z = circle_node(grid.r, j, grid.n);
    const auto [d, ratio] = jet(z);
    c.z[j] = z;
    c.derivative[j] = d;
    c.z_ratio[j] = z * ratio;
  }
  return c;
}

inline CircleJets circle_jets(const AnalyticMap& f, const CheckGrid& grid) {
  return circle_jets([&f](Complex z) { return std::pair{f.derivative(z), f.second_ratio(z)}; }, grid);
}

inline CheckReport kaplan_report(const CircleJets& c, std::span<const double> q, const std::string& name) {
  const auto k = kaplan_from_samples(q);
  return {name, k.margin, c.r, static_cast<int>(c.z.size()), c.z[k.arc_start], std::nullopt, k.min_arc};
}

inline CheckReport kaplan_margin(const CircleJets& c) {
  std::vector<double> q(c.z.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (std::abs(c.derivative[j]) <= 1e-12)
      throw Error(ErrorCode::vanishing_derivative, "F' vanishes on the check circle");
    q[j] = (1.0 + c.z_ratio[j]).real();
  }
  return kaplan_report(c, q, "kaplan_margin");
}

/// Kaplan margin of an analytic F given as a callable z -> {F'(z), F''/F'(z)}.
template <typename Jet>
CheckReport kaplan_margin(const Jet& jet, const CheckGrid& grid) {
  return kaplan_margin(circle_jets(jet, grid));
}

inline CheckReport kaplan_margin(const AnalyticMap& f, const CheckGrid& grid) {
  return kaplan_margin(circle_jets(f, grid));
}

/// Lemma A surrogate: min over eps_count equispaced |eps| = 1 of the Kaplan
/// margin of F = h + eps g, where F' = h'(1 + eps omega) and
/// z F''/F' = z h''/h' + eps z omega' / (1 + eps omega). `h_jets` holds the
/// data of h and is reused across dilatations.
inline CheckReport lemma_a_from_jets(const CircleJets& h_jets, const Dilatation& omega, int eps_count) {
  if (eps_count < 1) throw Error(ErrorCode::domain, "epsilon sweep needs at least one sample");
  if (!(std::abs(omega(Complex{0.0, 0.0})) < 1.0))
    throw Error(ErrorCode::hypothesis_violation, "|g'(0)| < |h'(0)| fails");
  const std::size_t n = h_jets.z.size();
  std::vector<Complex> w(n), zw(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = omega(h_jets.z[j]);
    zw[j] = h_jets.z[j] * omega.derivative(h_jets.z[j]);
  }
  CheckReport worst;
  worst.margin = std::numeric_limits<double>::infinity();
  std::vector<double> q(n);
  for (int e = 0; e < eps_count; ++e) {
    const Complex eps = std::polar(1.0, kTwoPi * e / eps_count);
    for (std::size_t j = 0; j < n; ++j) {
      const Complex factor = 1.0 + eps * w[j];
      if (std::abs(h_jets.derivative[j] * factor) <= 1e-12)
        throw Error(ErrorCode::vanishing_derivative, "h' + eps g' vanishes on the check circle");
      q[j] = (1.0 + h_jets.z_ratio[j] + eps * zw[j] / factor).real();
    }
    auto rep = kaplan_report(h_jets, q, "harmonic_ctc_lemmaA");
    if (rep.margin < worst.margin) {
      worst = rep;
      worst.gamma = kTwoPi * e / eps_count;  // argument of the worst eps
    }
  }
  return worst;
}

inline CheckReport harmonic_ctc_lemmaA(const HarmonicMap& f, int eps_count, const CheckGrid& grid) {
  return lemma_a_from_jets(circle_jets(f.h(), grid), f.omega(), eps_count);
}

/// Starlike comparison functions used by the close-to-convexity proofs.
class StarlikeComparison {
 public:
  enum class Kind { from_kbeta, koebe_rotation, from_vk, from_g };

  /// S(z) = z prod (1 - conj(x_k) z)^{-2 t_k} from a K(beta) representation.
  static StarlikeComparison from_kbeta(const ProductDerivative& h) {
    if (h.label().kind != ClassKind::kbeta) throw Error(ErrorCode::domain, "from_kbeta needs a K(beta) product");
    const double scale = -2.0 * (1.0 - h.label().parameter);
    std::vector<ProductFactor> f;
    for (const auto& fac : h.factors()) f.push_back({fac.atom, -2.0 * fac.exponent / scale});
    StarlikeComparison s(Kind::from_kbeta);
    s.product_ = ProductDerivative(std::move(f), ClassLabel::starlike_beta(0.0));
    return s;
  }

  /// k(z) = conj(c) z / (1 - z)^2.
  static StarlikeComparison koebe_rotation(Complex c = {1.0, 0.0}) {
    StarlikeComparison s(Kind::koebe_rotation);
    s.c_ = c / std::abs(c);
    return s;
  }

  /// S(z) = z prod (1 - conj(y_k) z)^{alpha_k - beta_k}, pairing the k-th
  /// numerator atom with the k-th denominator atom (missing alpha_k = 0).
  static StarlikeComparison from_vk(const ProductDerivative& h) {
    if (h.label().kind != ClassKind::vk) throw Error(ErrorCode::domain, "from_vk needs a V_K product");
    std::vector<ProductFactor> num, den;
    for (const auto& fac : h.factors()) (fac.exponent >= 0.0 ? num : den).push_back(fac);
    std::vector<ProductFactor> f;
    for (std::size_t k = 0; k < den.size(); ++k) {
      const double alpha = k < num.size() ? num[k].exponent : 0.0;
      f.push_back({den[k].atom, alpha + den[k].exponent});
    }
    StarlikeComparison s(Kind::from_vk);
    s.product_ = ProductDerivative(std::move(f), ClassLabel::starlike_beta(0.0));
    return s;
  }

  /// W(z) = z (1 + eps omega(z)).
  static StarlikeComparison from_g(const Dilatation& omega, Complex eps = {1.0, 0.0}) {
    StarlikeComparison s(Kind::from_g);
    s.omega_ = omega;
    s.eps_ = eps;
    return s;
  }

  Kind kind() const { return kind_; }

  Complex operator()(Complex z) const {
    switch (kind_) {
      case Kind::from_kbeta:
      case Kind::from_vk: return z * (*product_)(z);
      case Kind::koebe_rotation: return std::conj(c_) * z / ((1.0 - z) * (1.0 - z));
      case Kind::from_g: return z * (1.0 + eps_ * omega_(z));
    }
    return {};
  }

  /// z S'(z) / S(z).
  Complex z_log_derivative(Complex z) const {
    switch (kind_) {
      case Kind::from_kbeta:
      case Kind::from_vk: return 1.0 + z * product_->log_derivative(z);
      case Kind::koebe_rotation: return (1.0 + z) / (1.0 - z);
      case Kind::from_g: return 1.0 + eps_ * z * omega_.derivative(z) / (1.0 + eps_ * omega_(z));
    }
    return {};
  }

  /// min Re(z S'/S) on the grid; starlike on |z| <= r iff this is >= 0.
  double starlike_margin(const CheckGrid& grid) const {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid.n; ++j) best = std::min(best, z_log_derivative(circle_node(grid.r, j, grid.n)).real());
    return best;
  }

 private:
  explicit StarlikeComparison(Kind k) : kind_(k) {}

  Kind kind_;
  std::optional<ProductDerivative> product_;
  Complex c_{1.0, 0.0};
  Dilatation omega_;
  Complex eps_{1.0, 0.0};
};

/// Explicit certificate Re(e^{i gamma} z F'/S) > 0 on |z| = r. gamma is
/// seeded by minus the argument of the mean of A = z F'/S and refined by
/// golden-section maximisation of min_j Re(e^{i gamma} A_j) on the half-turn
/// bracket around the seed, where that minimum is concave wherever positive.
template <typename Derivative>
CheckReport ctc_certificate(const Derivative& fprime, const StarlikeComparison& s, const CheckGrid& grid) {
  require_grid(grid);
  const double star = s.starlike_margin(grid);
  if (star < -kPassSlack)
    throw Error(ErrorCode::hypothesis_violation, "comparison function is not starlike on the grid");
  std::vector<Complex> a(grid.n);
  Complex mean{0.0, 0.0};
  for (int j = 0; j < grid.n; ++j) {
    const Complex z = circle_node(grid.r, j, grid.n);
    const Complex sv = s(z);
    if (std::abs(sv) < 1e-12) throw Error(ErrorCode::comparison_vanishes, "S vanishes on the grid");
    a[j] = z * fprime(z) / sv;
    mean += a[j];
  }
  auto objective = [&a](double gamma, int* where = nullptr) {
    const Complex rot = std::polar(1.0, gamma);
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double v = (rot * a[j]).real();
      if (v < m) {
        m = v;
        if (where) *where = static_cast<int>(j);
      }
    }
    return m;
  };
  const double seed = std::abs(mean) > 0.0 ? -std::arg(mean) : 0.0;
  double lo = seed - kPi / 2.0, hi = seed + kPi / 2.0;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    }
  }
  double gamma = 0.5 * (lo + hi);
  if (objective(seed) > objective(gamma)) gamma = seed;
  gamma = std::remainder(gamma, kTwoPi);
  int where = 0;
  const double m = objective(gamma, &where);
  return {"ctc_certificate", m, grid.r, grid.n, circle_node(grid.r, where, grid.n), gamma, m};
}

/// True iff the image of |z| = r winds exactly once around each of
/// probe_count equispaced points on |w| = target_radius.
inline bool covering_check(const HarmonicMap& f, double r, double target_radius, int probe_count,
                           const WindingOptions& opt = {}) {
  if (probe_count < 1) throw Error(ErrorCode::domain, "covering check needs probes");
  for (int p = 0; p < probe_count; ++p) {
    const Complex target = std::polar(target_radius, kTwoPi * p / probe_count);
    WindingCount w;
    try {
      w = winding_count(f, r, target, opt);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::near_curve) throw Error(ErrorCode::curve_through_probe, e.what());
      throw;
    }
    if (w.count != 1) return false;
  }
  return true;
}

}  // namespace harmap
