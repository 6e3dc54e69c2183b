#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "harmap/render.hpp"

using namespace harmap;

namespace {

std::vector<std::pair<double, double>> path_points(const std::string& svg) {
  std::vector<std::pair<double, double>> out;
  const std::regex pt("[ML]([-0-9.]+) ([-0-9.]+)");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pt); it != std::sregex_iterator(); ++it)
    out.emplace_back(std::stod((*it)[1]), std::stod((*it)[2]));
  return out;
}

}  // namespace

TEST(Curves, IdentityFamily) {
  RenderOptions opt;
  opt.rays = 8;
  opt.circles = 4;
  opt.points = 50;
  const auto fam = sample_curves(builtin("identity"), opt);
  ASSERT_EQ(fam.rays.size(), 8u);
  ASSERT_EQ(fam.circles.size(), 4u);
  for (const auto& ray : fam.rays) {
    EXPECT_EQ(ray.points.front(), Complex(0.0, 0.0));
    // Straight segment: every vertex is t e^{i angle}.
    const double angle = std::arg(ray.points.back());
    for (std::size_t i = 0; i < ray.points.size(); ++i)
      EXPECT_LE(std::abs(ray.points[i] - std::polar(ray.t[i], angle)), 1e-12);
  }
  for (std::size_t k = 0; k < fam.circles.size(); ++k)
    for (const auto& w : fam.circles[k].points) EXPECT_NEAR(std::abs(w), opt.max_r * (k + 1) / 4, 1e-12);
  EXPECT_NEAR(fam.bounds.min_x, -opt.max_r, 1e-12);
  EXPECT_NEAR(fam.bounds.max_x, opt.max_r, 1e-12);
  EXPECT_NEAR(fam.bounds.min_y, -opt.max_r, 1e-3);
  EXPECT_NEAR(fam.bounds.max_y, opt.max_r, 1e-3);
}

TEST(Curves, VertexCount) {
  RenderOptions opt;
  opt.rays = 5;
  opt.circles = 3;
  opt.points = 37;
  const auto fam = sample_curves(f1_map({0.5, 0.0}), opt);
  EXPECT_EQ(fam.vertex_count(), static_cast<std::size_t>(5 * 37 + 3 * 37));
}

TEST(Curves, RaysMatchPointEvaluation) {
  RenderOptions opt;
  opt.rays = 6;
  opt.circles = 2;
  opt.points = 40;
  opt.max_r = 0.95;
  const auto f = f_k_delta_map(3.0, 0.5);
  const auto fam = sample_curves(f, opt);
  for (int j = 0; j < opt.rays; ++j) {
    const Complex z = std::polar(opt.max_r, kTwoPi * j / opt.rays);
    EXPECT_LE(std::abs(fam.rays[j].points.back() - f.eval_f(z)), 1e-9);
  }
}

TEST(Curves, Guards) {
  RenderOptions opt;
  opt.points = 1;
  EXPECT_THROW(sample_curves(builtin("identity"), opt), Error);
  opt.points = 10;
  opt.max_r = 1.0;
  EXPECT_THROW(sample_curves(builtin("identity"), opt), Error);
}

TEST(Svg, EmptyFamily) {
  const std::string svg = svg_document(CurveFamily{});
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("<path"), std::string::npos);
}

TEST(Svg, IdentityBoundsMapToCanvas) {
  RenderOptions opt;
  opt.rays = 4;
  opt.circles = 2;
  opt.points = 200;
  const auto fam = sample_curves(builtin("identity"), opt);
  const int width = 600;
  const auto pts = path_points(svg_document(fam, width));
  ASSERT_FALSE(pts.empty());
  double lo_x = 1e9, hi_x = -1e9, lo_y = 1e9, hi_y = -1e9;
  for (const auto& [x, y] : pts) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  }
  // 5% margin on each side of the bounds.
  const double scale = width / (1.1 * (fam.bounds.max_x - fam.bounds.min_x));
  const double margin = 0.05 * (fam.bounds.max_x - fam.bounds.min_x) * scale;
  EXPECT_NEAR(lo_x, margin, 1.0);
  EXPECT_NEAR(hi_x, width - margin, 1.0);
  EXPECT_NEAR(lo_y, 0.05 * (fam.bounds.max_y - fam.bounds.min_y) * scale, 1.0);
  EXPECT_NEAR(hi_y - lo_y, (fam.bounds.max_y - fam.bounds.min_y) * scale, 1.0);
  EXPECT_NE(svg_document(fam).find(" Z\"/>"), std::string::npos);
}

TEST(Svg, ImaginaryAxisPointsUp) {
  CurveFamily fam;
  Polyline line;
  line.t = {0.0, 1.0};
  line.points = {{0.0, -1.0}, {0.0, 1.0}};
  fam.rays.push_back(line);
  for (const auto& w : line.points) fam.bounds.include(w);
  const auto pts = path_points(svg_document(fam));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_GT(pts[0].second, pts[1].second);
}

TEST(Svg, ByteDeterministic) {
  const auto a = sample_curves(f1_map({0.2, 0.0}));
  const auto b = sample_curves(f1_map({0.2, 0.0}));
  EXPECT_EQ(svg_document(a), svg_document(b));
  EXPECT_EQ(vertex_hash(a), vertex_hash(b));
  EXPECT_NE(vertex_hash(a), vertex_hash(sample_curves(f1_map({0.5, 0.0}))));
}

TEST(Svg, FigureBatchesWriteFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "harmap_render_test";
  std::filesystem::create_directories(dir);
  RenderOptions opt;
  opt.rays = 6;
  opt.circles = 3;
  opt.points = 60;
  const auto specs = figure2_specs();
  ASSERT_EQ(specs.size(), 8u);
  for (const auto& s : specs) emit_svg(sample_curves(s.map, opt), (dir / (s.id + ".svg")).string());
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".svg" && e.path().filename().string().rfind("fig2", 0) == 0) ++files;
  EXPECT_EQ(files, 8);
  EXPECT_EQ(figure1_specs().size(), 4u);
  EXPECT_EQ(figure1_specs()[1].id, "fig1b");
  EXPECT_THROW(emit_svg(CurveFamily{}, "/nonexistent-dir/x.svg"), Error);
  std::filesystem::remove_all(dir);
}

TEST(Csv, Sidecar) {
  RenderOptions opt;
  opt.rays = 2;
  opt.circles = 1;
  opt.points = 5;
  const auto fam = sample_curves(builtin("identity"), opt);
  std::ostringstream os;
  write_curves_csv(os, fam);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "curve_id,t,re,im");
  int rows = 0;
  std::string last;
  while (std::getline(in, line)) ++rows, last = line;
  EXPECT_EQ(rows, 15);
  EXPECT_EQ(last.substr(0, 2), "2,");
}
