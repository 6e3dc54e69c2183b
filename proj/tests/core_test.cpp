#include <random>

#include <gtest/gtest.h>

#include "harmap/core.hpp"
#include "harmap/means.hpp"
#include "harmap/sampling.hpp"

using namespace harmap;

namespace {

void expect_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

}  // namespace

TEST(PrincipalPower, Examples) {
  expect_near(principal_power({1.0, 0.0}, 7.3), {1.0, 0.0}, 0.0);
  expect_near(principal_power({2.0, 0.0}, 0.5), {std::sqrt(2.0), 0.0}, 1e-15);
  expect_near(principal_power({1.0, 1.0}, 2.0), {0.0, 2.0}, 1e-14);
}

TEST(PrincipalPower, RejectsLeftHalfPlane) {
  EXPECT_THROW(principal_power({-1.0, 0.5}, 0.5), Error);
  EXPECT_THROW(principal_power({0.0, 1.0}, 0.5), Error);
}

TEST(PrincipalPower, ExponentsAdd) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> re(0.1, 3.0), im(-3.0, 3.0), ex(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const Complex w{re(rng), im(rng)};
    const double a = ex(rng), b = ex(rng);
    const Complex lhs = principal_power(w, a + b), rhs = principal_power(w, a) * principal_power(w, b);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(UnitPoint, StoresAngle) {
  UnitPoint x(3 * kPi);
  EXPECT_NEAR(x.angle(), kPi, 1e-15);
  EXPECT_NEAR(std::abs(x.value()), 1.0, 1e-16);
  EXPECT_TRUE(UnitPoint(kTwoPi).is_one());
  EXPECT_THROW(UnitPoint(std::nan("")), Error);
}

TEST(Antiderivative, Examples) {
  expect_near(antiderivative_on_segment([](Complex) { return Complex{1.0, 0.0}; }, {0.3, 0.4}), {0.3, 0.4}, 1e-15);
  expect_near(antiderivative_on_segment([](Complex z) { return 1.0 / ((1.0 - z) * (1.0 - z)); }, {0.5, 0.0}),
              {1.0, 0.0}, 1e-12);
  expect_near(antiderivative_on_segment([](Complex z) { return 1.0 / ((1.0 - z) * (1.0 - z) * (1.0 - z)); },
                                        {0.5, 0.0}),
              {1.5, 0.0}, 1e-12);
}

TEST(Antiderivative, ReproducesPolynomials) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Complex> c(11);
    for (std::size_t k = 1; k < c.size(); ++k) c[k] = {u(rng), u(rng)};
    auto p = [&](Complex z) {
      Complex s{0.0, 0.0};
      for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
      return s;
    };
    auto dp = [&](Complex z) {
      Complex s{0.0, 0.0};
      for (std::size_t k = c.size(); k-- > 1;) s = s * z + static_cast<double>(k) * c[k];
      return s;
    };
    for (int i = 0; i < 10; ++i) {
      const Complex z = std::polar(0.99 * std::sqrt(0.5 * (u(rng) + 1.0)), kPi * u(rng));
      EXPECT_LE(std::abs(antiderivative_on_segment(dp, z) - p(z)), 1e-12);
    }
  }
}

TEST(CircleMean, Examples) {
  EXPECT_DOUBLE_EQ(circle_mean([](double) { return 2.5; }, 16), 2.5);
  EXPECT_NEAR(circle_mean([](double t) { return std::cos(t) * std::cos(t); }, 64), 0.5, 1e-15);
  EXPECT_NEAR(circle_mean([](double t) { return std::norm(1.0 - std::polar(0.5, t)); }, 64), 1.25, 1e-15);
}

TEST(CircleMean, SquaredDistance) {
  for (int i = 1; i <= 9; ++i) {
    const double r = 0.1 * i;
    for (int n : {8, 16, 100})
      EXPECT_NEAR(circle_mean([r](double t) { return std::norm(1.0 - std::polar(r, t)); }, n), 1.0 + r * r, 1e-12);
  }
}

TEST(BetaFunction, Examples) {
  EXPECT_NEAR(beta_function(1.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(beta_function(1.5, 0.5), kPi / 2.0, 1e-12);
  EXPECT_NEAR(beta_function(2.0, 0.5), 4.0 / 3.0, 1e-12);
  EXPECT_NEAR(beta_function(0.5, 0.5), kPi, 1e-12);
  EXPECT_THROW(beta_function(0.0, 1.0), Error);
}

TEST(BetaFunction, MatchesQuadratureOracle) {
  const double grid[] = {0.5, 1.0, 1.5, 2.0, 3.0};
  for (double a : grid)
    for (double b : grid) EXPECT_NEAR(beta_function(a, b), beta_by_quadrature(a, b), 1e-9) << a << "," << b;
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  const auto& rule = gauss_legendre(8);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 14);
  EXPECT_NEAR(s, 2.0 / 15.0, 1e-14);
}

TEST(Radius, Guard) {
  EXPECT_THROW(require_radius(Complex{1.0, 0.0}), Error);
  EXPECT_NO_THROW(require_radius(Complex{0.999, 0.0}));
  EXPECT_THROW(require_radius(-0.1), Error);
}

TEST(Accumulation, CircleMatchesClosedForm) {
  auto d = [](Complex z) { return 1.0 / ((1.0 - z) * (1.0 - z)); };
  const double r = 0.95;
  const auto v = accumulate_on_circle(d, Complex{r / (1.0 - r), 0.0}, r, 256);
  for (int j = 0; j < 256; j += 17) {
    const Complex z = circle_node(r, j, 256);
    EXPECT_LE(std::abs(v[j] - z / (1.0 - z)), 1e-10);
  }
}
