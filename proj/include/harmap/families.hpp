#pragma once

// Extreme-point (finite atomic) representations of h' for the classes
// K(beta), V_K, CO(alpha) and G, the closed-form extremal functions, the
// dilatations used with them, and harmonic maps f = h + conj(g).

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "harmap/core.hpp"

namespace harmap {

enum class ClassKind { kbeta, vk, co_alpha, class_g, starlike_beta, closed_form };

struct ClassLabel {
  ClassKind kind = ClassKind::closed_form;
  double parameter = 0.0;  // beta, K or alpha; unused for G
  std::string name;        // closed-form name

  static ClassLabel kbeta(double beta) { return {ClassKind::kbeta, beta, "KBeta"}; }
  static ClassLabel vk(double k) { return {ClassKind::vk, k, "VK"}; }
  static ClassLabel co_alpha(double alpha) { return {ClassKind::co_alpha, alpha, "COAlpha"}; }
  static ClassLabel class_g() { return {ClassKind::class_g, 0.0, "ClassG"}; }
  static ClassLabel starlike_beta(double beta) { return {ClassKind::starlike_beta, beta, "StarlikeBeta"}; }
  static ClassLabel closed(std::string name) { return {ClassKind::closed_form, 0.0, std::move(name)}; }
};

/// One factor (1 - conj(x) z)^exponent.
struct ProductFactor {
  UnitPoint atom;
  double exponent = 0.0;

  Complex base(Complex z) const { return 1.0 - atom.conj_value() * z; }
};

inline constexpr double kMaxExponent = 8.0;
inline constexpr double kWeightTolerance = 1e-12;

/// h'(z) as a finite product of factors (1 - conj(x_k) z)^{e_k}; equals 1 at 0.
class ProductDerivative {
 public:
  ProductDerivative() = default;
  ProductDerivative(std::vector<ProductFactor> factors, ClassLabel label)
      : factors_(std::move(factors)), label_(std::move(label)) {
    for (const auto& f : factors_)
      if (!std::isfinite(f.exponent) || std::abs(f.exponent) > kMaxExponent)
        throw Error(ErrorCode::domain, "factor exponent outside [-8, 8]");
  }

  const std::vector<ProductFactor>& factors() const { return factors_; }
  const ClassLabel& label() const { return label_; }

  /// Sum of e_k Log(1 - conj(x_k) z), i.e. the principal log of h'.
  Complex log_value(Complex z) const {
    Complex s{0.0, 0.0};
    for (const auto& f : factors_) {
      Complex w = f.base(z);
      if (!(w.real() > 0.0)) throw Error(ErrorCode::domain, "factor base outside right half-plane");
      s += f.exponent * std::log(w);
    }
    return s;
  }

  Complex operator()(Complex z) const { return std::exp(log_value(z)); }

  /// |h'(z)|^p without forming h'.
  double abs_power(Complex z, double p) const { return std::exp(p * log_value(z).real()); }

  /// h''/h' = sum of -e_k conj(x_k) / (1 - conj(x_k) z).
  Complex log_derivative(Complex z) const {
    Complex s{0.0, 0.0};
    for (const auto& f : factors_) {
      Complex xb = f.atom.conj_value();
      s -= f.exponent * xb / (1.0 - xb * z);
    }
    return s;
  }

  /// d/dz of log_derivative.
  Complex log_derivative_prime(Complex z) const {
    Complex s{0.0, 0.0};
    for (const auto& f : factors_) {
      Complex xb = f.atom.conj_value();
      Complex d = 1.0 - xb * z;
      s -= f.exponent * xb * xb / (d * d);
    }
    return s;
  }

 private:
  std::vector<ProductFactor> factors_;
  ClassLabel label_;
};

struct WeightedAtom {
  UnitPoint atom;
  double weight = 0.0;
};

namespace detail {

inline std::vector<double> validated_weights(const std::vector<WeightedAtom>& atoms, double target,
                                             double lo, double hi, const char* what) {
  double sum = 0.0;
  std::vector<double> w;
  w.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!std::isfinite(a.weight) || a.weight < lo || a.weight > hi)
      throw Error(ErrorCode::invalid_weights, std::string(what) + " weight out of range");
    sum += a.weight;
    w.push_back(a.weight);
  }
  if (std::abs(sum - target) > kWeightTolerance)
    throw Error(ErrorCode::invalid_weights, std::string(what) + " weights sum to " +
                                                std::to_string(sum) + ", expected " +
                                                std::to_string(target));
  // Renormalise exactly so downstream checks see exact class membership.
  if (sum > 0.0)
    for (double& x : w) x *= target / sum;
  return w;
}

}  // namespace detail

/// K(beta): h'(z) = prod (1 - conj(x_k) z)^{-2(1-beta) t_k}, sum t_k = 1.
inline ProductDerivative build_kbeta(double beta, const std::vector<WeightedAtom>& atoms) {
  if (!(beta >= -0.5 && beta < 1.0)) throw Error(ErrorCode::domain, "K(beta) needs beta in [-1/2, 1)");
  auto t = detail::validated_weights(atoms, 1.0, 0.0, 1.0, "K(beta)");
  std::vector<ProductFactor> factors;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    factors.push_back({atoms[k].atom, -2.0 * (1.0 - beta) * t[k]});
  return {std::move(factors), ClassLabel::kbeta(beta)};
}

/// V_K: h' = prod (1 - conj(x_k) z)^{alpha_k} / prod (1 - conj(y_k) z)^{beta_k}
/// with sum alpha = K/2 - 1, sum beta = K/2 + 1, all weights in [0, 1].
inline ProductDerivative build_vk(double k, const std::vector<WeightedAtom>& numerator,
                                  const std::vector<WeightedAtom>& denominator) {
  if (!(k >= 2.0 && k <= 4.0)) throw Error(ErrorCode::domain, "V_K needs K in [2, 4]");
  auto a = detail::validated_weights(numerator, k / 2.0 - 1.0, 0.0, 1.0, "V_K numerator");
  auto b = detail::validated_weights(denominator, k / 2.0 + 1.0, 0.0, 1.0, "V_K denominator");
  std::vector<ProductFactor> factors;
  for (std::size_t i = 0; i < numerator.size(); ++i) factors.push_back({numerator[i].atom, a[i]});
  for (std::size_t i = 0; i < denominator.size(); ++i) factors.push_back({denominator[i].atom, -b[i]});
  return {std::move(factors), ClassLabel::vk(k)};
}

/// CO(alpha): h' = prod (1 - e^{i t_k} z)^{beta_k} / (1 - z)^{alpha+1}, with
/// each atom given as e^{i t_k}, t_k in (0, 2 pi), and sum beta_k = alpha - 1.
inline ProductDerivative build_co_alpha(double alpha, const std::vector<WeightedAtom>& atoms) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw Error(ErrorCode::domain, "CO(alpha) needs alpha in (1, 2)");
  for (const auto& a : atoms)
    if (a.atom.is_one()) throw Error(ErrorCode::atom_at_one, "CO(alpha) numerator atom equals 1");
  for (const auto& a : atoms)
    if (!(a.weight > 0.0)) throw Error(ErrorCode::invalid_weights, "CO(alpha) weights must be positive");
  auto b = detail::validated_weights(atoms, alpha - 1.0, 0.0, 1.0, "CO(alpha)");
  std::vector<ProductFactor> factors;
  // (1 - e^{it} z) = (1 - conj(x) z) with x = e^{-it}.
  for (std::size_t i = 0; i < atoms.size(); ++i)
    factors.push_back({UnitPoint(-atoms[i].atom.angle()), b[i]});
  factors.push_back({UnitPoint(0.0), -(alpha + 1.0)});
  return {std::move(factors), ClassLabel::co_alpha(alpha)};
}

/// G: h'(z) = prod (1 - conj(x_k) z)^{alpha_k}, sum alpha_k = 1.
inline ProductDerivative build_class_g(const std::vector<WeightedAtom>& atoms) {
  auto a = detail::validated_weights(atoms, 1.0, 0.0, 1.0, "class G");
  std::vector<ProductFactor> factors;
  for (std::size_t i = 0; i < atoms.size(); ++i) factors.push_back({atoms[i].atom, a[i]});
  return {std::move(factors), ClassLabel::class_g()};
}

/// S*(beta): h(z) = z prod (1 - conj(x_k) z)^{-2(1-beta) t_k}, sum t_k = 1.
/// The product here is h(z)/z, not h'.
inline ProductDerivative build_starlike(double beta, const std::vector<WeightedAtom>& atoms) {
  if (!(beta >= -0.5 && beta < 1.0)) throw Error(ErrorCode::domain, "S*(beta) needs beta in [-1/2, 1)");
  auto t = detail::validated_weights(atoms, 1.0, 0.0, 1.0, "S*(beta)");
  std::vector<ProductFactor> factors;
  for (std::size_t k = 0; k < atoms.size(); ++k)
    factors.push_back({atoms[k].atom, -2.0 * (1.0 - beta) * t[k]});
  return {std::move(factors), ClassLabel::starlike_beta(beta)};
}

enum class ClosedKind {
  polynomial,
  h0,              // (z - z^2/2) / (1 - z)^2
  g_k,             // (1/K) [((1+z)/(1-z))^{K/2} - 1]
  koebe_analytic,  // (z - z^2/2 + z^3/6) / (1 - z)^3
  koebe_coanalytic // (z^2/2 + z^3/6) / (1 - z)^3
};

/// An analytic function on the disk with value, derivative and f''/f'.
/// Product-derivative forms get their values by quadrature.
class AnalyticMap {
 public:
  enum class Form { derivative_product, value_product, closed };

  AnalyticMap() : AnalyticMap(polynomial({0.0, 1.0})) {}

  static AnalyticMap from_derivative(ProductDerivative p) {
    AnalyticMap m;
    m.form_ = Form::derivative_product;
    m.label_ = p.label();
    m.product_ = std::move(p);
    return m;
  }

  /// h(z) = z * p(z).
  static AnalyticMap from_value_product(ProductDerivative p) {
    AnalyticMap m;
    m.form_ = Form::value_product;
    m.label_ = p.label();
    m.product_ = std::move(p);
    return m;
  }

  static AnalyticMap polynomial(std::vector<Complex> coeffs, std::string name = "polynomial") {
    AnalyticMap m(Form::closed, ClosedKind::polynomial);
    m.coeffs_ = std::move(coeffs);
    m.label_ = ClassLabel::closed(std::move(name));
    return m;
  }

  static AnalyticMap closed(ClosedKind kind, double parameter = 0.0) {
    AnalyticMap m(Form::closed, kind);
    m.parameter_ = parameter;
    switch (kind) {
      case ClosedKind::h0: m.label_ = ClassLabel::closed("h0"); break;
      case ClosedKind::g_k:
        if (!(parameter >= 2.0)) throw Error(ErrorCode::domain, "g_K needs K >= 2");
        m.label_ = ClassLabel::closed("gK");
        break;
      case ClosedKind::koebe_analytic: m.label_ = ClassLabel::closed("koebe_h"); break;
      case ClosedKind::koebe_coanalytic: m.label_ = ClassLabel::closed("koebe_g"); break;
      case ClosedKind::polynomial: m.label_ = ClassLabel::closed("polynomial"); break;
    }
    return m;
  }

  Form form() const { return form_; }
  ClosedKind closed_kind() const { return kind_; }
  const ClassLabel& label() const { return label_; }
  const ProductDerivative* product() const { return product_ ? &*product_ : nullptr; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  double parameter() const { return parameter_; }
  bool has_closed_value() const { return form_ != Form::derivative_product; }

  AnalyticMap with_label(ClassLabel label) const {
    AnalyticMap m = *this;
    m.label_ = std::move(label);
    return m;
  }

  Complex derivative(Complex z) const {
    switch (form_) {
      case Form::derivative_product: return (*product_)(z);
      case Form::value_product: {
        const auto& p = *product_;
        return p(z) * (1.0 + z * p.log_derivative(z));
      }
      case Form::closed: break;
    }
    switch (kind_) {
      case ClosedKind::polynomial: {
        Complex s{0.0, 0.0};
        for (std::size_t k = coeffs_.size(); k-- > 1;) s = s * z + static_cast<double>(k) * coeffs_[k];
        return s;
      }
      case ClosedKind::h0: return 1.0 / cube(1.0 - z);
      case ClosedKind::g_k: {
        const double k = parameter_;
        return principal_power(1.0 + z, k / 2.0 - 1.0) * principal_power(1.0 - z, -k / 2.0 - 1.0);
      }
      case ClosedKind::koebe_analytic: return (1.0 + z) / sq(sq(1.0 - z));
      case ClosedKind::koebe_coanalytic: return z * (1.0 + z) / sq(sq(1.0 - z));
    }
    return {};
  }

  /// f''/f'.
  Complex second_ratio(Complex z) const {
    switch (form_) {
      case Form::derivative_product: return product_->log_derivative(z);
      case Form::value_product: {
        const auto& p = *product_;
        Complex l = p.log_derivative(z);
        Complex lp = p.log_derivative_prime(z);
        return l + (l + z * lp) / (1.0 + z * l);
      }
      case Form::closed: break;
    }
    switch (kind_) {
      case ClosedKind::polynomial: {
        Complex d1{0.0, 0.0}, d2{0.0, 0.0};
        for (std::size_t k = coeffs_.size(); k-- > 1;) d1 = d1 * z + static_cast<double>(k) * coeffs_[k];
        for (std::size_t k = coeffs_.size(); k-- > 2;)
          d2 = d2 * z + static_cast<double>(k * (k - 1)) * coeffs_[k];
        return d2 / d1;
      }
      case ClosedKind::h0: return 3.0 / (1.0 - z);
      case ClosedKind::g_k: {
        const double k = parameter_;
        return (k / 2.0 - 1.0) / (1.0 + z) + (k / 2.0 + 1.0) / (1.0 - z);
      }
      case ClosedKind::koebe_analytic: return 1.0 / (1.0 + z) + 4.0 / (1.0 - z);
      case ClosedKind::koebe_coanalytic: return 1.0 / z + 1.0 / (1.0 + z) + 4.0 / (1.0 - z);
    }
    return {};
  }

  /// Closed-form value; requires has_closed_value().
  Complex closed_value(Complex z) const {
    if (form_ == Form::value_product) return z * (*product_)(z);
    if (form_ == Form::derivative_product)
      throw Error(ErrorCode::domain, "no closed value for a derivative product");
    switch (kind_) {
      case ClosedKind::polynomial: {
        Complex s{0.0, 0.0};
        for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * z + coeffs_[k];
        return s;
      }
      case ClosedKind::h0: return (z - 0.5 * z * z) / sq(1.0 - z);
      case ClosedKind::g_k: {
        const double k = parameter_;
        return (principal_power((1.0 + z) / (1.0 - z), k / 2.0) - 1.0) / k;
      }
      case ClosedKind::koebe_analytic: return (z - 0.5 * z * z + z * z * z / 6.0) / cube(1.0 - z);
      case ClosedKind::koebe_coanalytic: return (0.5 * z * z + z * z * z / 6.0) / cube(1.0 - z);
    }
    return {};
  }

  /// f(z) with f(0) = 0; quadrature of f' when no closed form exists.
  Complex value(Complex z) const {
    require_radius(z);
    if (has_closed_value()) return closed_value(z);
    return antiderivative_on_segment([this](Complex w) { return derivative(w); }, z);
  }

 private:
  AnalyticMap(Form form, ClosedKind kind) : form_(form), kind_(kind) {}

  static Complex sq(Complex w) { return w * w; }
  static Complex cube(Complex w) { return w * w * w; }

  Form form_ = Form::closed;
  ClosedKind kind_ = ClosedKind::polynomial;
  ClassLabel label_;
  std::optional<ProductDerivative> product_;
  std::vector<Complex> coeffs_;
  double parameter_ = 0.0;
};

/// h''/h'.
inline Complex pre_schwarzian(const AnalyticMap& h, Complex z) {
  require_radius(z);
  return h.second_ratio(z);
}

/// Second complex dilatation omega(z) = a z^n with a certified sup-norm |a|.
class Dilatation {
 public:
  enum class Variant { rotation, scaled_rotation, monomial };

  Dilatation() = default;

  static Dilatation rotation(double theta) {
    return Dilatation(Variant::rotation, std::polar(1.0, theta), 1, 1.0, theta);
  }
  static Dilatation scaled_rotation(double c, double theta) {
    if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::domain, "scaled rotation needs 0 <= c <= 1");
    return Dilatation(Variant::scaled_rotation, std::polar(c, theta), 1, c, theta);
  }
  static Dilatation monomial(Complex lambda, int n) {
    require_finite(lambda, "dilatation coefficient");
    if (n < 1) throw Error(ErrorCode::domain, "monomial dilatation needs n >= 1");
    if (std::abs(lambda) > 1.0) throw Error(ErrorCode::domain, "monomial dilatation needs |lambda| <= 1");
    return Dilatation(Variant::monomial, lambda, n, std::abs(lambda), 0.0);
  }
  static Dilatation zero() { return monomial({0.0, 0.0}, 1); }

  Variant variant() const { return variant_; }
  Complex coefficient() const { return coeff_; }
  int power() const { return power_; }
  double sup_norm() const { return sup_; }
  double theta() const { return theta_; }
  /// c for scaled rotations, 1 for rotations, |lambda| for monomials.
  double scale() const { return sup_; }

  Complex operator()(Complex z) const { return coeff_ * ipow(z, power_); }
  Complex derivative(Complex z) const {
    return static_cast<double>(power_) * coeff_ * ipow(z, power_ - 1);
  }

  /// Same variant and power with the coefficient rescaled to modulus s and
  /// argument theta.
  Dilatation with_scale(double s, double theta) const {
    switch (variant_) {
      case Variant::rotation:
      case Variant::scaled_rotation: return scaled_rotation(s, theta);
      case Variant::monomial: return monomial(std::polar(s, theta), power_);
    }
    return *this;
  }

  static Complex ipow(Complex z, int n) {
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
  }

 private:
  Dilatation(Variant v, Complex a, int n, double sup, double theta)
      : variant_(v), coeff_(a), power_(n), sup_(sup), theta_(theta) {}

  Variant variant_ = Variant::monomial;
  Complex coeff_{0.0, 0.0};
  int power_ = 1;
  double sup_ = 0.0;
  double theta_ = 0.0;
};

/// f = h + conj(g) with g' = omega h', g(0) = 0. With omega = a z^n we keep
/// g = a * G where G' = z^n h', so rescaling omega never recomputes G.
class HarmonicMap {
 public:
  HarmonicMap() = default;
  HarmonicMap(AnalyticMap h, Dilatation omega, std::optional<AnalyticMap> g_base = std::nullopt,
              std::string name = {})
      : h_(std::move(h)), omega_(omega), g_base_(std::move(g_base)), name_(std::move(name)) {}

  const AnalyticMap& h() const { return h_; }
  const Dilatation& omega() const { return omega_; }
  const std::optional<AnalyticMap>& g_base_closed() const { return g_base_; }
  const std::string& name() const { return name_; }

  HarmonicMap with_omega(Dilatation omega) const {
    HarmonicMap m = *this;
    if (omega.power() != omega_.power()) m.g_base_.reset();
    m.omega_ = omega;
    return m;
  }

  Complex eval_hprime(Complex z) const {
    require_radius(z);
    return h_.derivative(z);
  }
  Complex eval_gprime(Complex z) const {
    require_radius(z);
    return omega_(z) * h_.derivative(z);
  }
  Complex eval_h(Complex z) const { return h_.value(z); }

  /// G(z) with G' = z^n h'.
  Complex g_base(Complex z) const {
    require_radius(z);
    if (g_base_) return g_base_->value(z);
    const int n = omega_.power();
    return antiderivative_on_segment([&](Complex w) { return Dilatation::ipow(w, n) * h_.derivative(w); }, z);
  }
  Complex g_base_derivative(Complex z) const { return Dilatation::ipow(z, omega_.power()) * h_.derivative(z); }

  Complex eval_g(Complex z) const {
    if (omega_.coefficient() == Complex{0.0, 0.0}) {
      require_radius(z);
      return {0.0, 0.0};
    }
    return omega_.coefficient() * g_base(z);
  }
  Complex eval_f(Complex z) const { return eval_h(z) + std::conj(eval_g(z)); }

  /// |h'|^2 - |g'|^2 = |h'|^2 (1 - |omega|^2).
  double jacobian(Complex z) const {
    require_radius(z);
    const double hp = std::norm(h_.derivative(z));
    return hp * (1.0 - std::norm(omega_(z)));
  }

 private:
  AnalyticMap h_;
  Dilatation omega_ = Dilatation::zero();
  std::optional<AnalyticMap> g_base_;
  std::string name_;
};

// --- closed-form builtins -------------------------------------------------

inline AnalyticMap h0_map() { return AnalyticMap::closed(ClosedKind::h0); }
inline AnalyticMap h1_map() { return AnalyticMap::polynomial({0.0, 1.0, -0.5}, "h1"); }
inline AnalyticMap identity_map() { return AnalyticMap::polynomial({0.0, 1.0}, "identity"); }
inline AnalyticMap g_k_map(double k) { return AnalyticMap::closed(ClosedKind::g_k, k); }

/// h0 as the single-atom member of K(-1/2).
inline ProductDerivative h0_product() { return build_kbeta(-0.5, {{UnitPoint(0.0), 1.0}}); }

/// g_K as a V_K quotient: (1+z)^{K/2-1} / (1-z)^{K/2+1}, the denominator
/// split into pieces of weight at most 1.
inline ProductDerivative g_k_product(double k) {
  std::vector<WeightedAtom> num, den;
  if (k / 2.0 - 1.0 > 0.0) num.push_back({UnitPoint(kPi), k / 2.0 - 1.0});
  double rest = k / 2.0 + 1.0;
  while (rest > 0.0) {
    double piece = std::min(1.0, rest);
    den.push_back({UnitPoint(0.0), piece});
    rest -= piece;
    if (rest < 1e-15) rest = 0.0;
  }
  return build_vk(k, num, den);
}

/// h1 = z - z^2/2 as the single-atom member of G.
inline ProductDerivative h1_product() { return build_class_g({{UnitPoint(0.0), 1.0}}); }

inline HarmonicMap koebe_harmonic() {
  return HarmonicMap(AnalyticMap::closed(ClosedKind::koebe_analytic), Dilatation::rotation(0.0),
                     AnalyticMap::closed(ClosedKind::koebe_coanalytic), "koebe_harmonic");
}

/// f1 = h1 + conj(lambda (z^2/2 - z^3/3)).
inline HarmonicMap f1_map(Complex lambda) {
  return HarmonicMap(h1_map(), Dilatation::monomial(lambda, 1),
                     AnalyticMap::polynomial({0.0, 0.0, 0.5, -1.0 / 3.0}, "g1_base"), "f1");
}

/// f_{K,delta} = g_K + conj(g) with g' = sin(delta pi / 4) z g_K'.
inline HarmonicMap f_k_delta_map(double k, double delta) {
  if (!(k >= 2.0 && k <= 4.0)) throw Error(ErrorCode::domain, "f_{K,delta} needs K in [2, 4]");
  return HarmonicMap(g_k_map(k), Dilatation::scaled_rotation(std::sin(delta * kPi / 4.0), 0.0),
                     std::nullopt, "fKdelta");
}

struct BuiltinParams {
  double k = 3.0;
  double delta = 1.0;
  Complex lambda{0.5, 0.0};
};

/// Closed-form builtins by name: h0, h1, identity, gK, koebe_harmonic, f1, fKdelta.
inline HarmonicMap builtin(const std::string& name, const BuiltinParams& p = {}) {
  if (name == "h0") return HarmonicMap(h0_map(), Dilatation::zero(), std::nullopt, "h0");
  if (name == "h1") return HarmonicMap(h1_map(), Dilatation::zero(), std::nullopt, "h1");
  if (name == "identity") return HarmonicMap(identity_map(), Dilatation::zero(), std::nullopt, "identity");
  if (name == "gK") return HarmonicMap(g_k_map(p.k), Dilatation::zero(), std::nullopt, "gK");
  if (name == "koebe_harmonic") return koebe_harmonic();
  if (name == "f1") return f1_map(p.lambda);
  if (name == "fKdelta") return f_k_delta_map(p.k, p.delta);
  throw Error(ErrorCode::unknown_name, "unknown builtin '" + name + "'");
}

// --- seeded random class members -----------------------------------------

/// Reproducible random members of the dense subclasses: atoms uniform on the
/// circle, weights from a symmetric Dirichlet(1) distribution.
class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  std::vector<WeightedAtom> atoms(int count, double total) {
    std::vector<WeightedAtom> out;
    auto w = dirichlet(count);
    for (int i = 0; i < count; ++i) out.push_back({UnitPoint(angle()), w[i] * total});
    fix_sum(out, total);
    return out;
  }

  ProductDerivative kbeta(double beta, int max_atoms = 6) {
    return build_kbeta(beta, atoms(count(1, max_atoms), 1.0));
  }

  ProductDerivative class_g(int max_atoms = 6) { return build_class_g(atoms(count(1, max_atoms), 1.0)); }

  ProductDerivative co_alpha(double alpha, int max_atoms = 6) {
    const int n = count(1, max_atoms);
    std::vector<WeightedAtom> a;
    auto w = dirichlet(n);
    for (int i = 0; i < n; ++i) {
      double t = angle();
      while (t < 1e-3 || t > kTwoPi - 1e-3) t = angle();
      a.push_back({UnitPoint(t), w[i] * (alpha - 1.0)});
    }
    fix_sum(a, alpha - 1.0);
    return build_co_alpha(alpha, a);
  }

  ProductDerivative vk(double k, int max_atoms = 6) {
    const double pos = k / 2.0 - 1.0, neg = k / 2.0 + 1.0;
    std::vector<WeightedAtom> num;
    if (pos > 0.0) num = atoms(count(1, std::min(3, max_atoms)), pos);
    const int min_den = static_cast<int>(std::ceil(neg - 1e-12));
    std::vector<WeightedAtom> den;
    for (;;) {
      den = atoms(count(std::max(min_den, 1), std::max(max_atoms, min_den)), neg);
      bool ok = true;
      for (const auto& d : den) ok = ok && d.weight <= 1.0;
      if (ok) break;
    }
    return build_vk(k, num, den);
  }

  ProductDerivative starlike(double beta, int max_atoms = 6) {
    return build_starlike(beta, atoms(count(1, max_atoms), 1.0));
  }

  double angle() { return std::uniform_real_distribution<double>(0.0, kTwoPi)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int count(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::vector<double> dirichlet(int n) {
    std::gamma_distribution<double> gamma(1.0, 1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& x : w) {
      x = gamma(rng_);
      s += x;
    }
    for (auto& x : w) x /= s;
    return w;
  }

  // Push rounding residue into the largest weight so the sum is exact.
  static void fix_sum(std::vector<WeightedAtom>& a, double total) {
    if (a.empty()) return;
    double s = 0.0;
    std::size_t big = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      s += a[i].weight;
      if (a[i].weight > a[big].weight) big = i;
    }
    a[big].weight += total - s;
  }

  std::mt19937_64 rng_;
};

}  // namespace harmap
