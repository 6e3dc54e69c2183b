#include <gtest/gtest.h>

#include "harmap/io.hpp"

using namespace harmap;

TEST(Complex, JsonForms) {
  EXPECT_EQ(json_complex(Json(0.5)), Complex(0.5, 0.0));
  EXPECT_EQ(json_complex(Json::array({0.5, -1.0})), Complex(0.5, -1.0));
  EXPECT_EQ(json_complex(Json{{"re", 1.0}, {"im", 2.0}}), Complex(1.0, 2.0));
  EXPECT_THROW(json_complex(Json("x")), Error);
  EXPECT_EQ(json_complex(complex_json({3.0, 4.0})), Complex(3.0, 4.0));
}

TEST(Descriptor, KBetaRoundTrip) {
  const auto j = Json::parse(R"({"class": "KBeta", "parameters": {"beta": -0.5},
                                  "atoms": [{"angle": 0.0, "weight": 0.5}, {"angle": 3.0, "weight": 0.5}],
                                  "dilatation": {"variant": "rotation", "params": {"theta": 0.4}}})");
  const auto d = descriptor_from_json(j);
  const auto f = d.build();
  EXPECT_EQ(f.h().label().kind, ClassKind::kbeta);
  EXPECT_EQ(f.omega().variant(), Dilatation::Variant::rotation);
  EXPECT_NEAR(f.omega().theta(), 0.4, 1e-15);
  const auto again = descriptor_from_json(to_json(d));
  EXPECT_EQ(to_json(again), to_json(d));
  const Complex z{0.3, 0.1};
  EXPECT_EQ(again.build().eval_hprime(z), f.eval_hprime(z));
}

TEST(Descriptor, VKNegativeWeightsAreDenominator) {
  const auto j = Json::parse(R"({"class": "VK", "parameters": {"K": 3},
                                  "atoms": [{"angle": 3.141592653589793, "weight": 0.5},
                                            {"angle": 0, "weight": -1}, {"angle": 0, "weight": -1},
                                            {"angle": 0, "weight": -0.5}]})");
  const auto h = descriptor_from_json(j).build_analytic();
  const Complex z{0.2, -0.4};
  EXPECT_LE(std::abs(h.derivative(z) - g_k_map(3.0).derivative(z)), 1e-12);
}

TEST(Descriptor, AllClasses) {
  for (const char* text : {
           R"({"class": "COAlpha", "parameters": {"alpha": 1.5}, "atoms": [{"angle": 3.14159, "weight": 0.5}]})",
           R"({"class": "ClassG", "atoms": [{"angle": 0, "weight": 1}],
               "dilatation": {"variant": "monomial", "params": {"lambda": [0.25, 0.1], "n": 2}}})",
           R"({"class": "StarlikeBeta", "parameters": {"beta": 0}, "atoms": [{"angle": 1, "weight": 1}]})",
           R"({"class": "builtin", "parameters": {"name": "fKdelta", "K": 2.5, "delta": 1}})",
           R"({"class": "builtin", "parameters": {"name": "f1", "lambda": [0.5, 0]}})"}) {
    const auto f = descriptor_from_json(Json::parse(text)).build();
    EXPECT_NEAR(std::abs(f.eval_hprime({0.0, 0.0}) - Complex(1.0, 0.0)), 0.0, 1e-12) << text;
  }
}

TEST(Descriptor, BuiltinWithDilatationOverride) {
  const auto d = descriptor_from_json(Json::parse(
      R"({"class": "builtin", "parameters": {"name": "f1"}, "dilatation": {"variant": "monomial", "params": {"lambda": 0.3}}})"));
  EXPECT_EQ(d.build().omega().coefficient(), Complex(0.3, 0.0));
}

TEST(Descriptor, Errors) {
  auto code_of = [](const char* text) {
    try {
      descriptor_from_json(Json::parse(text)).build();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;  // sentinel: no error
  };
  EXPECT_EQ(code_of(R"({"class": "KBeta", "parameters": {"beta": 0}, "atoms": [], "extra": 1})"), ErrorCode::parse);
  EXPECT_EQ(code_of(R"({"class": "Nope"})"), ErrorCode::unknown_name);
  EXPECT_EQ(code_of(R"({"class": "KBeta", "atoms": [{"angle": 0, "weight": 1}]})"), ErrorCode::parse);
  EXPECT_EQ(code_of(R"({"class": "KBeta", "parameters": {"beta": 0}, "atoms": [{"angle": 0, "weight": 0.4}]})"),
            ErrorCode::invalid_weights);
  EXPECT_EQ(code_of(R"({"class": "ClassG", "atoms": [{"angle": 0, "weight": 1}], "dilatation": {"variant": "wobble"}})"),
            ErrorCode::unknown_name);
  EXPECT_EQ(code_of(R"({"class": "builtin", "parameters": {"name": "zeta"}})"), ErrorCode::unknown_name);
}

TEST(Reports, CheckReportJson) {
  const auto rep = convexity_order(h0_map(), {0.9, 256});
  const auto j = to_json(rep);
  EXPECT_EQ(j.at("name"), "convexity_order");
  EXPECT_EQ(j.at("grid_n"), 256);
  EXPECT_DOUBLE_EQ(j.at("margin").get<double>(), rep.margin);
  EXPECT_TRUE(j.at("gamma").is_null());
  EXPECT_TRUE(j.at("witness").is_object());
  EXPECT_EQ(j.at("pass"), rep.pass());
}

TEST(Reports, SeriesRoundTrip) {
  const auto s = exact_series(AnalyticMap::from_derivative(h0_product()), 6);
  const auto back = series_from_json(to_json(s));
  ASSERT_EQ(back.size(), 6);
  for (int k = 1; k <= 6; ++k) EXPECT_EQ(back.at(k), s.at(k));
}

TEST(Reports, CollisionAndProbeJson) {
  const auto rep = grid_injectivity(builtin("identity"), PolarGrid{0.9, 16, 64});
  const auto j = to_json(rep);
  EXPECT_EQ(j.at("tag"), "evidence");
  EXPECT_TRUE(j.at("pair").is_null());

  ProbeOptions opt;
  opt.instances = 0;
  opt.theta_count = 2;
  opt.steps = 2;
  opt.grid.radial_m = 0;
  const auto p = to_json(conjecture_probe(ConjectureSpec::cor1(1), opt));
  EXPECT_EQ(p.at("conjecture"), "cor1");
  EXPECT_EQ(p.at("bracket").size(), 2u);
  EXPECT_EQ(p.at("trials"), 4);
}
