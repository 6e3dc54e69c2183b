#include <random>

#include <gtest/gtest.h>

#include "harmap/families.hpp"
#include "harmap/geometry.hpp"

using namespace harmap;

namespace {

void expect_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

std::vector<Complex> random_points(std::uint64_t seed, int count, double max_r) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(max_r * std::sqrt(u(rng)), kTwoPi * u(rng)));
  return out;
}

// Derivative products of every class, from the seeded generator.
std::vector<AnalyticMap> sample_members(std::uint64_t seed) {
  InstanceGenerator gen(seed);
  std::vector<AnalyticMap> out;
  for (int i = 0; i < 4; ++i) {
    out.push_back(AnalyticMap::from_derivative(gen.kbeta(gen.uniform(-0.5, 0.9))));
    out.push_back(AnalyticMap::from_derivative(gen.vk(gen.uniform(2.0, 4.0))));
    out.push_back(AnalyticMap::from_derivative(gen.co_alpha(gen.uniform(1.05, 1.95))));
    out.push_back(AnalyticMap::from_derivative(gen.class_g()));
    out.push_back(AnalyticMap::from_value_product(gen.starlike(gen.uniform(-0.5, 0.9))));
  }
  return out;
}

}  // namespace

TEST(BuildKBeta, Examples) {
  const auto h0 = build_kbeta(-0.5, {{UnitPoint(0.0), 1.0}});
  expect_near(h0({0.5, 0.0}), {8.0, 0.0}, 1e-12);
  expect_near(h0({0.2, 0.3}), 1.0 / std::pow(Complex{0.8, -0.3}, 3), 1e-12);
  const auto koebe = build_kbeta(0.0, {{UnitPoint(0.0), 1.0}});
  expect_near(koebe({0.5, 0.0}), {4.0, 0.0}, 1e-12);
  const auto two = build_kbeta(-0.5, {{UnitPoint(0.0), 0.5}, {UnitPoint(kPi), 0.5}});
  EXPECT_NEAR(two({0.5, 0.0}).real(), std::pow(0.5, -1.5) * std::pow(1.5, -1.5), 1e-12);
  EXPECT_NEAR(two({0.5, 0.0}).real(), 1.5396, 1e-4);
}

TEST(BuildKBeta, RejectsBadInput) {
  EXPECT_THROW(build_kbeta(-0.6, {{UnitPoint(0.0), 1.0}}), Error);
  EXPECT_THROW(build_kbeta(1.0, {{UnitPoint(0.0), 1.0}}), Error);
  try {
    build_kbeta(0.0, {{UnitPoint(0.0), 0.7}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_weights);
  }
}

TEST(BuildVK, Examples) {
  const auto convex = build_vk(2.0, {}, {{UnitPoint(0.0), 1.0}, {UnitPoint(0.0), 1.0}});
  expect_near(convex({0.5, 0.0}), {4.0, 0.0}, 1e-12);
  const auto g3 = build_vk(3.0, {{UnitPoint(kPi), 0.5}}, {{UnitPoint(0.0), 1.0}, {UnitPoint(0.0), 1.0}, {UnitPoint(0.0), 0.5}});
  for (Complex z : random_points(3, 20, 0.9))
    expect_near(g3(z), std::pow(1.0 + z, 0.5) / std::pow(1.0 - z, 2.5), 1e-12);
  expect_near(g3({0.0, 0.0}), {1.0, 0.0}, 0.0);
  // Denominator weights above one are outside the dense subclass.
  EXPECT_THROW(build_vk(3.0, {{UnitPoint(kPi), 0.5}}, {{UnitPoint(0.0), 2.5}}), Error);
}

TEST(BuildCOAlpha, Examples) {
  const auto h = build_co_alpha(1.5, {{UnitPoint(kPi), 0.5}});
  expect_near(h({0.0, 0.0}), {1.0, 0.0}, 0.0);
  EXPECT_NEAR(h({0.5, 0.0}).real(), std::sqrt(1.5) * std::pow(0.5, -2.5), 1e-12);
  EXPECT_NEAR(h({0.5, 0.0}).real(), 6.9282, 1e-4);
  try {
    build_co_alpha(1.5, {{UnitPoint(0.0), 0.5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::atom_at_one);
  }
  EXPECT_THROW(build_co_alpha(2.0, {{UnitPoint(kPi), 1.0}}), Error);
}

TEST(BuildClassG, Examples) {
  const auto h1 = build_class_g({{UnitPoint(0.0), 1.0}});
  expect_near(h1({0.3, 0.2}), {0.7, -0.2}, 1e-15);
  const auto sym = build_class_g({{UnitPoint(0.0), 0.5}, {UnitPoint(kPi), 0.5}});
  EXPECT_NEAR(sym({0.6, 0.0}).real(), 0.8, 1e-12);
  expect_near(sym({0.0, 0.0}), {1.0, 0.0}, 0.0);
}

TEST(Members, NormalisedAtOrigin) {
  for (const auto& h : sample_members(11)) expect_near(h.derivative({0.0, 0.0}), {1.0, 0.0}, 1e-15);
}

TEST(Builtins, Examples) {
  const auto h0 = builtin("h0");
  expect_near(h0.eval_h({0.5, 0.0}), {1.5, 0.0}, 1e-14);
  for (double k : {2.0, 2.5, 3.0, 4.0}) {
    BuiltinParams p;
    p.k = k;
    expect_near(builtin("gK", p).eval_hprime({0.0, 0.0}), {1.0, 0.0}, 1e-15);
  }
  const auto koebe = builtin("koebe_harmonic");
  expect_near(koebe.eval_f({0.0, 0.0}), {0.0, 0.0}, 0.0);
  expect_near(koebe.eval_hprime({0.0, 0.0}), {1.0, 0.0}, 0.0);
  EXPECT_THROW(builtin("nope"), Error);
}

TEST(Builtins, GKMatchesProduct) {
  for (double k : {2.0, 2.5, 3.0, 3.5, 4.0}) {
    const auto closed = g_k_map(k);
    const auto product = AnalyticMap::from_derivative(g_k_product(k));
    for (Complex z : random_points(5, 10, 0.9)) {
      expect_near(closed.derivative(z), product.derivative(z), 1e-10 * std::abs(closed.derivative(z)));
      expect_near(closed.value(z), product.value(z), 1e-10 * std::max(1.0, std::abs(closed.value(z))));
    }
  }
}

TEST(Evaluation, Examples) {
  for (const auto& name : {"h0", "h1", "identity", "gK", "koebe_harmonic", "f1", "fKdelta"}) {
    const auto f = builtin(name);
    expect_near(f.eval_f({0.0, 0.0}), {0.0, 0.0}, 1e-15);
    EXPECT_NEAR(f.jacobian({0.0, 0.0}), 1.0, 1e-15) << name;
  }
  const auto f1 = f1_map({0.5, 0.0});
  EXPECT_NEAR(f1.eval_h({0.5, 0.0}).real(), 0.375, 1e-15);
  EXPECT_NEAR(f1.eval_g({0.5, 0.0}).real(), 0.5 * (0.125 - 1.0 / 24.0), 1e-15);
  EXPECT_NEAR(f1.eval_f({0.5, 0.0}).real(), 0.375 + 0.5 * (0.125 - 1.0 / 24.0), 1e-15);
  EXPECT_NEAR(f1.eval_f({0.5, 0.0}).imag(), 0.0, 1e-15);
  EXPECT_NEAR(f1_map({0.9, 0.0}).jacobian({0.9, 0.0}), 0.003439, 1e-12);
}

TEST(Evaluation, RadiusGuard) {
  EXPECT_THROW(builtin("h0").eval_f({0.9999999, 0.0}), Error);
  EXPECT_THROW(builtin("f1").jacobian({0.0, 1.0}), Error);
}

TEST(Evaluation, QuadratureHMatchesClosedForm) {
  // h0 as a K(-1/2) product: values come from quadrature.
  const auto p = AnalyticMap::from_derivative(h0_product());
  for (Complex z : random_points(9, 30, 0.95)) {
    const Complex exact = (z - 0.5 * z * z) / ((1.0 - z) * (1.0 - z));
    EXPECT_LE(std::abs(p.value(z) - exact), 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Dilatation, Variants) {
  EXPECT_DOUBLE_EQ(Dilatation::rotation(0.3).sup_norm(), 1.0);
  EXPECT_DOUBLE_EQ(Dilatation::scaled_rotation(0.4, 1.0).sup_norm(), 0.4);
  EXPECT_DOUBLE_EQ(Dilatation::monomial({0.3, 0.4}, 2).sup_norm(), 0.5);
  for (const auto& w : {Dilatation::rotation(0.3), Dilatation::scaled_rotation(0.4, 1.0),
                        Dilatation::monomial({0.3, 0.4}, 2), Dilatation::zero()})
    expect_near(w({0.0, 0.0}), {0.0, 0.0}, 0.0);
  EXPECT_THROW(Dilatation::scaled_rotation(1.5, 0.0), Error);
  EXPECT_THROW(Dilatation::monomial({1.0, 1.0}, 1), Error);
  EXPECT_THROW(Dilatation::monomial({0.5, 0.0}, 0), Error);
  const auto w = Dilatation::monomial({0.5, 0.0}, 3).with_scale(0.2, kPi);
  EXPECT_EQ(w.power(), 3);
  expect_near(w.coefficient(), {-0.2, 0.0}, 1e-15);
}

TEST(PreSchwarzian, Examples) {
  expect_near(pre_schwarzian(h0_map(), {0.0, 0.0}), {3.0, 0.0}, 1e-15);
  expect_near(pre_schwarzian(AnalyticMap::from_derivative(h0_product()), {0.0, 0.0}), {3.0, 0.0}, 1e-15);
  expect_near(pre_schwarzian(h1_map(), {0.0, 0.0}), {-1.0, 0.0}, 1e-15);
  expect_near(pre_schwarzian(AnalyticMap::from_derivative(h1_product()), {0.0, 0.0}), {-1.0, 0.0}, 1e-15);
  // At the origin: sum of -e_k conj(x_k).
  const auto p = build_kbeta(0.0, {{UnitPoint(1.0), 0.25}, {UnitPoint(2.0), 0.75}});
  const Complex expected = 2.0 * 0.25 * std::polar(1.0, -1.0) + 2.0 * 0.75 * std::polar(1.0, -2.0);
  expect_near(pre_schwarzian(AnalyticMap::from_derivative(p), {0.0, 0.0}), expected, 1e-15);
}

TEST(PreSchwarzian, MatchesFiniteDifferences) {
  const double step = 1e-5;
  for (const auto& h : sample_members(21))
    for (Complex z : random_points(22, 50, 0.9)) {
      // The quotient is close to 1, so its principal log has no branch issue.
      const Complex fd = std::log(h.derivative(z + step) / h.derivative(z - step)) / (2.0 * step);
      EXPECT_LE(std::abs(fd - pre_schwarzian(h, z)), 1e-6 * std::max(1.0, std::abs(fd)));
    }
}

TEST(HarmonicMap, GPrimeIsOmegaHPrime) {
  InstanceGenerator gen(31);
  const double step = 1e-5;
  for (int i = 0; i < 5; ++i) {
    const HarmonicMap f(AnalyticMap::from_derivative(gen.kbeta(-0.25)),
                        Dilatation::scaled_rotation(0.6, gen.angle()));
    for (Complex z : random_points(32 + i, 10, 0.85)) {
      const Complex fd = (f.eval_g(z + step) - f.eval_g(z - step)) / (2.0 * step);
      EXPECT_LE(std::abs(fd - f.eval_gprime(z)), 1e-7 * std::max(1.0, std::abs(f.eval_gprime(z))));
    }
    expect_near(f.eval_g({0.0, 0.0}), {0.0, 0.0}, 0.0);
  }
}

TEST(HarmonicMap, JacobianPositiveBelowUnitNorm) {
  InstanceGenerator gen(41);
  for (int i = 0; i < 10; ++i) {
    const HarmonicMap f(AnalyticMap::from_derivative(gen.vk(3.0)), Dilatation::scaled_rotation(0.9, gen.angle()));
    for (Complex z : random_points(42 + i, 50, 0.99)) EXPECT_GT(f.jacobian(z), 0.0);
  }
}

TEST(HarmonicMap, WithOmegaKeepsClosedGOnlyForSamePower) {
  const auto f = f1_map({0.5, 0.0});
  EXPECT_TRUE(f.with_omega(Dilatation::monomial({0.2, 0.0}, 1)).g_base_closed().has_value());
  EXPECT_FALSE(f.with_omega(Dilatation::monomial({0.2, 0.0}, 2)).g_base_closed().has_value());
  const auto g = f.with_omega(Dilatation::monomial({0.2, 0.0}, 2));
  // g' = 0.2 z^2 h1' = 0.2 (z^2 - z^3): g = 0.2 (z^3/3 - z^4/4).
  const Complex z{0.4, 0.3};
  expect_near(g.eval_g(z), 0.2 * (z * z * z / 3.0 - z * z * z * z / 4.0), 1e-13);
}

TEST(ClassInvariants, KBetaOrder) {
  InstanceGenerator gen(51);
  for (double beta : {-0.5, -0.25, 0.0, 0.5}) {
    for (int i = 0; i < 10; ++i) {
      const auto h = AnalyticMap::from_derivative(gen.kbeta(beta));
      EXPECT_GE(convexity_order(h, {0.99, 1024}, Extremum::min).extremum, beta - 1e-6);
    }
  }
}

TEST(ClassInvariants, ClassGUpperBound) {
  InstanceGenerator gen(52);
  for (int i = 0; i < 20; ++i) {
    const auto h = AnalyticMap::from_derivative(gen.class_g());
    EXPECT_LE(convexity_order(h, {0.99, 1024}, Extremum::max).extremum, 1.5 + 1e-6);
  }
}

TEST(ClassInvariants, GeneratorIsSeeded) {
  InstanceGenerator a(7), b(7);
  const auto pa = a.vk(3.3), pb = b.vk(3.3);
  ASSERT_EQ(pa.factors().size(), pb.factors().size());
  for (std::size_t i = 0; i < pa.factors().size(); ++i) {
    EXPECT_EQ(pa.factors()[i].atom, pb.factors()[i].atom);
    EXPECT_EQ(pa.factors()[i].exponent, pb.factors()[i].exponent);
  }
}

TEST(ClassInvariants, ExponentSums) {
  InstanceGenerator gen(53);
  for (int i = 0; i < 20; ++i) {
    const double k = gen.uniform(2.0, 4.0);
    const auto p = gen.vk(k);
    double pos = 0.0, neg = 0.0;
    for (const auto& f : p.factors()) {
      EXPECT_LE(std::abs(f.exponent), 1.0 + 1e-12);
      (f.exponent >= 0.0 ? pos : neg) += f.exponent;
    }
    EXPECT_NEAR(pos, k / 2.0 - 1.0, 1e-12);
    EXPECT_NEAR(neg, -(k / 2.0 + 1.0), 1e-12);
  }
}
