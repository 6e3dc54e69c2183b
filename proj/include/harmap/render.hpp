#pragma once

// Images of equally spaced radial segments and concentric circles, emitted
// as SVG (one path per polyline) with a CSV sidecar.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "harmap/core.hpp"
#include "harmap/families.hpp"
#include "harmap/sampling.hpp"

namespace harmap {

struct Bounds {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  bool empty = true;

  void include(Complex w) {
    if (empty) {
      min_x = max_x = w.real();
      min_y = max_y = w.imag();
      empty = false;
      return;
    }
    min_x = std::min(min_x, w.real());
    max_x = std::max(max_x, w.real());
    min_y = std::min(min_y, w.imag());
    max_y = std::max(max_y, w.imag());
  }
};

struct Polyline {
  std::vector<double> t;  // radius along rays, angle along circles
  std::vector<Complex> points;
};

struct CurveFamily {
  std::vector<Polyline> rays;
  std::vector<Polyline> circles;
  Bounds bounds;

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& p : rays) n += p.points.size();
    for (const auto& p : circles) n += p.points.size();
    return n;
  }
};

struct RenderOptions {
  int rays = 24;
  int circles = 12;
  double max_r = 0.999;
  int points = 400;
};

inline CurveFamily sample_curves(const HarmonicMap& f, const RenderOptions& opt = {}) {
  require_radius(opt.max_r);
  if (opt.rays < 0 || opt.circles < 0 || opt.points < 2) throw Error(ErrorCode::domain, "bad curve counts");
  const Complex coeff = f.omega().coefficient();
  CurveFamily fam;
  std::vector<double> radii(opt.points);
  for (int i = 0; i < opt.points; ++i) radii[i] = opt.max_r * i / (opt.points - 1);
  // The ray accumulator starts at the origin, so drop the leading 0 radius.
  const std::vector<double> positive(radii.begin() + 1, radii.end());
  auto hd = [&f](Complex w) { return f.h().derivative(w); };
  auto gd = [&f](Complex w) { return f.g_base_derivative(w); };
  for (int j = 0; j < opt.rays; ++j) {
    const double angle = kTwoPi * j / opt.rays;
    std::vector<Complex> hv(positive.size()), gv(positive.size());
    if (f.h().has_closed_value()) {
      for (std::size_t i = 0; i < positive.size(); ++i) hv[i] = f.h().closed_value(std::polar(positive[i], angle));
    } else {
      hv = accumulate_on_ray(hd, angle, positive);
    }
    if (coeff != Complex{0.0, 0.0}) {
      if (f.g_base_closed()) {
        for (std::size_t i = 0; i < positive.size(); ++i)
          gv[i] = f.g_base_closed()->closed_value(std::polar(positive[i], angle));
      } else {
        gv = accumulate_on_ray(gd, angle, positive);
      }
    }
    Polyline line;
    line.t = radii;
    line.points.push_back({0.0, 0.0});
    for (std::size_t i = 0; i < positive.size(); ++i) line.points.push_back(hv[i] + std::conj(coeff * gv[i]));
    fam.rays.push_back(std::move(line));
  }
  for (int k = 1; k <= opt.circles; ++k) {
    const double r = opt.max_r * k / opt.circles;
    const auto parts = sample_circle(f, r, opt.points);
    Polyline line;
    for (int i = 0; i < opt.points; ++i) line.t.push_back(kTwoPi * i / opt.points);
    line.points = parts.f_values(coeff);
    fam.circles.push_back(std::move(line));
  }
  for (const auto* group : {&fam.rays, &fam.circles})
    for (const auto& line : *group)
      for (const auto& w : line.points) {
        require_finite(w, "curve vertex");
        fam.bounds.include(w);
      }
  return fam;
}

namespace detail {

inline void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v == 0.0 ? 0.0 : v);  // no "-0.000"
  if (std::strcmp(buf, "-0.000") == 0) std::strcpy(buf, "0.000");
  out += buf;
}

}  // namespace detail

/// SVG text: viewBox fitted to the bounds with a 5% margin, y flipped so the
/// imaginary axis points up. Circles are closed paths.
inline std::string svg_document(const CurveFamily& fam, int width_px = 600, double stroke = 0.6) {
  double min_x = -1.0, max_x = 1.0, min_y = -1.0, max_y = 1.0;
  if (!fam.bounds.empty) {
    min_x = fam.bounds.min_x;
    max_x = fam.bounds.max_x;
    min_y = fam.bounds.min_y;
    max_y = fam.bounds.max_y;
  }
  double w = max_x - min_x, h = max_y - min_y;
  if (w <= 0.0) w = 1.0;
  if (h <= 0.0) h = 1.0;
  const double mx = 0.05 * w, my = 0.05 * h;
  const double span_x = w + 2 * mx, span_y = h + 2 * my;
  const double scale = width_px / span_x;
  const int height_px = std::max(1, static_cast<int>(std::lround(span_y * scale)));
  auto px = [&](Complex z) { return std::pair{(z.real() - min_x + mx) * scale, (max_y + my - z.imag()) * scale}; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(width_px) +
         "\" height=\"" + std::to_string(height_px) + "\" viewBox=\"0 0 " + std::to_string(width_px) + " " +
         std::to_string(height_px) + "\">\n";
  char head[128];
  std::snprintf(head, sizeof head, "<g fill=\"none\" stroke=\"black\" stroke-width=\"%.3f\">\n", stroke);
  out += head;
  auto emit = [&](const Polyline& line, bool closed) {
    if (line.points.empty()) return;
    out += "<path d=\"";
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      const auto [x, y] = px(line.points[i]);
      out += i == 0 ? "M" : " L";
      detail::append_number(out, x);
      out += ' ';
      detail::append_number(out, y);
    }
    if (closed) out += " Z";
    out += "\"/>\n";
  };
  for (const auto& line : fam.rays) emit(line, false);
  for (const auto& line : fam.circles) emit(line, true);
  out += "</g>\n</svg>\n";
  return out;
}

inline void emit_svg(const CurveFamily& fam, const std::string& path, int width_px = 600, double stroke = 0.6) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::io, "cannot open " + path);
  os << svg_document(fam, width_px, stroke);
  if (!os) throw Error(ErrorCode::io, "write failed for " + path);
}

/// CSV sidecar: rays get ids 0..rays-1, circles follow.
inline void write_curves_csv(std::ostream& os, const CurveFamily& fam) {
  os << "curve_id,t,re,im\n";
  char buf[128];
  int id = 0;
  for (const auto* group : {&fam.rays, &fam.circles})
    for (const auto& line : *group) {
      for (std::size_t i = 0; i < line.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", id, line.t[i], line.points[i].real(),
                      line.points[i].imag());
        os << buf;
      }
      ++id;
    }
}

/// FNV-1a over the exact bit patterns of every vertex, rays then circles.
inline std::uint64_t vertex_hash(const CurveFamily& fam) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  for (const auto* group : {&fam.rays, &fam.circles})
    for (const auto& line : *group)
      for (const auto& w : line.points) {
        mix(w.real());
        mix(w.imag());
      }
  return h;
}

struct FigureSpec {
  std::string id;     // e.g. "fig1a"
  HarmonicMap map;
};

/// Figure 1: f1 with lambda in {1/5, 1/2, 5/9, 9/10}.
inline std::vector<FigureSpec> figure1_specs() {
  const std::vector<std::pair<std::string, double>> lambdas{
      {"fig1a", 0.2}, {"fig1b", 0.5}, {"fig1c", 5.0 / 9.0}, {"fig1d", 0.9}};
  std::vector<FigureSpec> out;
  for (const auto& [id, l] : lambdas) out.push_back({id, f1_map({l, 0.0})});
  return out;
}

/// Figure 2: f_{K,delta} for the eight (delta, K) pairs of the caption.
inline std::vector<std::pair<double, double>> figure2_parameters() {
  return {{0.5, 3.0}, {1.0, 2.5}, {1.5, 2.1}, {1.0, 2.75}, {1.9, 2.05}, {0.1, 2.05}, {0.1, 3.0}, {0.1, 3.85}};
}

inline std::vector<FigureSpec> figure2_specs() {
  std::vector<FigureSpec> out;
  char id = 'a';
  for (const auto& [delta, k] : figure2_parameters()) out.push_back({std::string("fig2") + id++, f_k_delta_map(k, delta)});
  return out;
}

}  // namespace harmap
