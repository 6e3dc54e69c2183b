#pragma once

// JSON forms of function descriptors, check reports, series and probe
// results. A descriptor is
//   {"class": ..., "parameters": {...}, "atoms": [{"angle", "weight"}],
//    "dilatation": {"variant": ..., "params": {...}}}
// where a V_K atom with negative weight is a denominator factor.

#include <string>
#include <vector>

#include <json.hpp>

#include "harmap/alexander.hpp"
#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "harmap/means.hpp"
#include "harmap/univalence.hpp"

namespace harmap {

using Json = nlohmann::json;

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex json_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.at("re").get<double>(), j.at("im").get<double>()};
  throw Error(ErrorCode::parse, "expected a complex number");
}

struct DilatationSpec {
  std::string variant = "zero";  // rotation | scaled_rotation | monomial | zero
  Json params = Json::object();

  Dilatation build() const {
    try {
      if (variant == "zero") return Dilatation::zero();
      if (variant == "rotation") return Dilatation::rotation(params.value("theta", 0.0));
      if (variant == "scaled_rotation") return Dilatation::scaled_rotation(params.at("c").get<double>(), params.value("theta", 0.0));
      if (variant == "monomial")
        return Dilatation::monomial(json_complex(params.at("lambda")), params.value("n", 1));
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::parse, std::string("dilatation: ") + e.what());
    }
    throw Error(ErrorCode::unknown_name, "unknown dilatation variant '" + variant + "'");
  }
};

struct FunctionDescriptor {
  std::string cls = "builtin";  // KBeta | VK | COAlpha | ClassG | StarlikeBeta | builtin
  Json parameters = Json::object();
  std::vector<WeightedAtom> atoms;
  DilatationSpec dilatation;

  HarmonicMap build() const {
    try {
      if (cls == "builtin") return build_builtin();
      const Dilatation omega = dilatation.build();
      AnalyticMap h = build_analytic();
      return HarmonicMap(std::move(h), omega, std::nullopt, cls);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::parse, std::string("descriptor: ") + e.what());
    }
  }

  AnalyticMap build_analytic() const {
    if (cls == "KBeta") return AnalyticMap::from_derivative(build_kbeta(parameters.at("beta").get<double>(), atoms));
    if (cls == "ClassG") return AnalyticMap::from_derivative(build_class_g(atoms));
    if (cls == "COAlpha") return AnalyticMap::from_derivative(build_co_alpha(parameters.at("alpha").get<double>(), atoms));
    if (cls == "StarlikeBeta")
      return AnalyticMap::from_value_product(build_starlike(parameters.at("beta").get<double>(), atoms));
    if (cls == "VK") {
      std::vector<WeightedAtom> num, den;
      for (const auto& a : atoms) (a.weight >= 0.0 ? num : den).push_back({a.atom, std::abs(a.weight)});
      return AnalyticMap::from_derivative(build_vk(parameters.at("K").get<double>(), num, den));
    }
    if (cls == "builtin") return build_builtin().h();
    throw Error(ErrorCode::unknown_name, "unknown class '" + cls + "'");
  }

 private:
  HarmonicMap build_builtin() const {
    BuiltinParams p;
    p.k = parameters.value("K", p.k);
    p.delta = parameters.value("delta", p.delta);
    if (parameters.contains("lambda")) p.lambda = json_complex(parameters.at("lambda"));
    HarmonicMap f = builtin(parameters.at("name").get<std::string>(), p);
    // An explicit dilatation overrides the builtin's own.
    if (dilatation.variant != "zero" || !dilatation.params.empty()) f = f.with_omega(dilatation.build());
    return f;
  }
};

inline Json to_json(const FunctionDescriptor& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms) atoms.push_back({{"angle", a.atom.angle()}, {"weight", a.weight}});
  return {{"class", d.cls},
          {"parameters", d.parameters},
          {"atoms", atoms},
          {"dilatation", {{"variant", d.dilatation.variant}, {"params", d.dilatation.params}}}};
}

inline FunctionDescriptor descriptor_from_json(const Json& j) {
  try {
    FunctionDescriptor d;
    for (const auto& [key, value] : j.items())
      if (key != "class" && key != "parameters" && key != "atoms" && key != "dilatation")
        throw Error(ErrorCode::parse, "unknown descriptor key '" + key + "'");
    d.cls = j.at("class").get<std::string>();
    d.parameters = j.value("parameters", Json::object());
    for (const auto& a : j.value("atoms", Json::array()))
      d.atoms.push_back({UnitPoint(a.at("angle").get<double>()), a.at("weight").get<double>()});
    if (j.contains("dilatation")) {
      d.dilatation.variant = j["dilatation"].at("variant").get<std::string>();
      d.dilatation.params = j["dilatation"].value("params", Json::object());
    }
    return d;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse, std::string("descriptor: ") + e.what());
  }
}

inline Json to_json(const CheckReport& r) {
  Json j = {{"name", r.name}, {"margin", r.margin}, {"r", r.r}, {"grid_n", r.grid_n}};
  j["witness"] = r.witness ? Json{{"re", r.witness->real()}, {"im", r.witness->imag()}} : Json(nullptr);
  j["gamma"] = r.gamma ? Json(*r.gamma) : Json(nullptr);
  j["pass"] = r.pass();
  return j;
}

inline Json to_json(const TaylorSeries& s) {
  Json a = Json::array();
  for (const auto& c : s.coefficients) a.push_back(complex_json(c));
  return a;
}

inline TaylorSeries series_from_json(const Json& j, double sample_radius = 0.0) {
  TaylorSeries s;
  s.sample_radius = sample_radius;
  for (const auto& c : j) s.coefficients.push_back(json_complex(c));
  return s;
}

inline Json to_json(const CollisionReport& c) {
  Json j = {{"found", c.found},          {"certified", c.certified},   {"tag", c.tag()},
            {"radial_m", c.radial_m},    {"angular_m", c.angular_m},   {"r", c.r},
            {"collision_threshold", c.collision_threshold}, {"separation_threshold", c.separation_threshold},
            {"candidates", c.candidates}, {"confirmed", c.confirmed}, {"unconfirmed", c.unconfirmed},
            {"refuted", c.refuted}};
  if (c.pair)
    j["pair"] = {{"z1", complex_json(c.pair->z1)}, {"z2", complex_json(c.pair->z2)},
                 {"image_distance", c.pair->image_distance}};
  else
    j["pair"] = nullptr;
  return j;
}

inline Json to_json(const ConjectureProbe& p) {
  return {{"conjecture", to_string(p.spec.kind)},
          {"parameter_name", p.parameter_name},
          {"conjectured", p.conjectured},
          {"critical_estimate", p.critical_estimate},
          {"bracket", {p.pass_value, p.fail_value}},
          {"method", p.method},
          {"trials", p.trials},
          {"failures", p.failures}};
}

inline Json to_json(const AlexResult& a) {
  Json per = Json::array();
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    Json r = to_json(a.reports[i]);
    r["lambda"] = complex_json(a.lambdas[i]);
    per.push_back(r);
  }
  return {{"starlike", to_json(a.starlike)}, {"sense_margin", a.sense_margin}, {"lambdas", per}, {"pass", a.pass()}};
}

}  // namespace harmap
