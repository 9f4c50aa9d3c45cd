#include "gl_carpet/carpet.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "gl_carpet/constructor.hpp"

namespace gl_carpet {
namespace {

const double kB1 = 3.0 * kLog2;

// Middle-third Cantor dust: four corner maps with ratio 1/3.
std::vector<AffineMap> CantorDust() {
  const double r = 1.0 / 3.0;
  return {{r, r, 0.0, 0.0}, {r, r, 2 * r, 0.0}, {r, r, 0.0, 2 * r}, {r, r, 2 * r, 2 * r}};
}

TEST(BuildIfsTest, Example1Layout) {
  const Construction c = synthesize(kB1);
  const IfsSpec ifs = build_ifs(c.spec);
  ASSERT_EQ(ifs.maps.size(), 151u);
  const double cx = std::exp(-c.spec.lambda);
  double right = 0.0;
  int family_a = 0;
  for (const AffineMap& m : ifs.maps) {
    right = std::max(right, m.translate_x + m.contract_x);
    if (m.family == MapFamily::kA) {
      ++family_a;
      EXPECT_EQ(m.translate_y, 0.0);
    } else {
      EXPECT_NEAR(m.translate_y, 1.0 - std::exp(-1.0), 1e-15);
    }
  }
  EXPECT_EQ(family_a, 150);
  EXPECT_NEAR(right, 301.0 * cx, 1e-24);
  EXPECT_LT(right, 1.0);
  // a-strip and b-strip are vertically disjoint
  EXPECT_LT(std::exp(-c.spec.psi_a), 1.0 - std::exp(-1.0));
}

TEST(BuildIfsTest, AllMapsAreStrictContractionsInsideSquare) {
  for (double b : {2.1, 2.5, 3.3, 3.95}) {
    const Construction c = synthesize(b, {AlphabetStrategy::kMinimal});
    const IfsSpec ifs = build_ifs(c.spec);
    EXPECT_EQ(static_cast<int>(ifs.maps.size()), c.spec.alphabet_size());
    for (const AffineMap& m : ifs.maps) {
      EXPECT_GT(m.contract_x, 0.0);
      EXPECT_LT(m.contract_x, 1.0);
      EXPECT_LT(m.contract_y, 1.0);
      EXPECT_LE(m.translate_x + m.contract_x, 1.0 + 1e-15);
      EXPECT_LE(m.translate_y + m.contract_y, 1.0 + 1e-15);
    }
  }
}

TEST(BuildIfsTest, OverlapDetected) {
  // lambda barely above psi leaves columns wider than the square allows.
  const CarpetSpec s{0.2, 5, 1, 0.1, 0.1};
  EXPECT_THROW(build_ifs(s), GeometryError);
}

TEST(CheckGeometryTest, OverlappingRectangles) {
  IfsSpec ifs;
  ifs.maps = {{0.5, 0.5, 0.0, 0.0}, {0.5, 0.5, 0.25, 0.25}};
  EXPECT_THROW(check_ifs_geometry(ifs), GeometryError);
  ifs.maps = {{0.5, 0.5, 0.0, 0.0}, {0.5, 0.5, 0.5, 0.5}};
  EXPECT_NO_THROW(check_ifs_geometry(ifs));
}

TEST(HausdorffDimensionTest, Values) {
  const Construction c = synthesize(kB1);
  EXPECT_NEAR(hausdorff_dimension(c.spec), 0.17441604792151595, 1e-9);
  const double psi = 0.7;
  EXPECT_NEAR(hausdorff_dimension(CarpetSpec{2.0, 1, 1, psi, psi}), kLog2 / psi, 1e-12);
  EXPECT_THROW(hausdorff_dimension(CarpetSpec{kLog2, 1, 1, kLog2, kLog2}), std::domain_error);
}

TEST(HausdorffDimensionTest, ConstructedSpecsMatchClosedForm) {
  for (double b : {2.05, 2.6, 3.4}) {
    const Construction c = synthesize(b, {AlphabetStrategy::kMinimal});
    const double d = hausdorff_dimension(c.spec);
    EXPECT_GT(d, 0.0);
    EXPECT_LT(d, 2.0);
    EXPECT_NEAR(d, c.constants.m_param + std::log(c.spec.ell_b) / c.spec.lambda, 1e-9);
  }
}

TEST(RasterizeTest, Example1DepthOneZoomed) {
  const Construction c = synthesize(kB1);
  const IfsSpec ifs = build_ifs(c.spec);
  const int w = 602;  // two pixels per column slot
  const Raster img = rasterize(ifs, 1, w, 64, kDefaultRectangleCap, first_level_extent(ifs));
  EXPECT_EQ(img.rectangles, 151);
  auto runs = [&](int row) {
    int count = 0;
    for (int col = 0; col < w; ++col) {
      if (img.at(col, row) && (col == 0 || !img.at(col - 1, row))) ++count;
    }
    return count;
  };
  // 150 strips along the bottom, one at the top right.
  EXPECT_EQ(runs(63), 150);
  EXPECT_EQ(runs(0), 1);
  EXPECT_TRUE(img.at(w - 1, 0));
  EXPECT_FALSE(img.at(w - 1, 63));
}

TEST(RasterizeTest, Example1UnitSquareIsNonEmpty) {
  const Construction c = synthesize(kB1);
  const Raster img = rasterize(build_ifs(c.spec), 1, 64, 64);
  EXPECT_GT(img.occupied(), 0);
}

TEST(RasterizeTest, NestingAcrossDepths) {
  const CarpetSpec s{3.0, 3, 2, 1.5, 1.0};
  const IfsSpec ifs = build_ifs(s);
  Raster prev = rasterize(ifs, 1, 128, 128);
  for (int d = 2; d <= 5; ++d) {
    const Raster next = rasterize(ifs, d, 128, 128);
    for (std::size_t i = 0; i < next.pixels.size(); ++i) {
      if (next.pixels[i]) {
        EXPECT_TRUE(prev.pixels[i]) << "depth " << d << " pixel " << i;
      }
    }
    EXPECT_LE(next.occupied(), prev.occupied());
    prev = next;
  }
}

TEST(RasterizeTest, RectangleCountAndCap) {
  const CarpetSpec s{3.0, 3, 2, 1.5, 1.0};
  const IfsSpec ifs = build_ifs(s);
  EXPECT_EQ(rasterize(ifs, 3, 32, 32).rectangles, 125);
  EXPECT_THROW(rasterize(ifs, 3, 32, 32, 100), ResourceError);
  EXPECT_THROW(rasterize(ifs, 0, 32, 32), std::invalid_argument);
  EXPECT_THROW(rasterize(ifs, 1, 8, 32), std::invalid_argument);
}

TEST(ChaosGameTest, ConcentratedWeightsReachFixedPoint) {
  const CarpetSpec s{3.0, 3, 2, 1.5, 1.0};
  const IfsSpec ifs = build_ifs(s);
  std::vector<double> w(5, 0.0);
  w[3] = 1.0;
  const auto pts = chaos_game(ifs, w, 500, 60, 0);
  const Point fp = ifs.maps[3].fixed_point();
  for (const Point& p : pts) {
    EXPECT_NEAR(p.x, fp.x, 1e-9);
    EXPECT_NEAR(p.y, fp.y, 1e-9);
  }
}

TEST(ChaosGameTest, PointsStayInSquareAndAreDeterministic) {
  const Construction c = synthesize(2.5, {AlphabetStrategy::kMinimal});
  const IfsSpec ifs = build_ifs(c.spec);
  const std::vector<double> w(ifs.maps.size(), 1.0 / ifs.maps.size());
  const auto a = chaos_game(ifs, w, 20000, 100, 42);
  const auto b = chaos_game(ifs, w, 20000, 100, 42);
  ASSERT_EQ(a.size(), 20000u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].x, b[i].x);
    ASSERT_EQ(a[i].y, b[i].y);
    EXPECT_GE(a[i].x, 0.0);
    EXPECT_LE(a[i].x, 1.0);
    EXPECT_GE(a[i].y, 0.0);
    EXPECT_LE(a[i].y, 1.0);
  }
  const auto other = chaos_game(ifs, w, 100, 100, 43);
  bool differs = false;
  for (std::size_t i = 0; i < other.size(); ++i) differs |= other[i].x != a[i].x;
  EXPECT_TRUE(differs);
}

TEST(ChaosGameTest, WeightLengthMismatch) {
  const IfsSpec ifs = build_ifs(CarpetSpec{3.0, 3, 2, 1.5, 1.0});
  const std::vector<double> w{0.5, 0.5};
  EXPECT_THROW(chaos_game(ifs, w, 10, 0, 0), std::invalid_argument);
}

TEST(BernoulliWeightsTest, UniformConditionals) {
  const CarpetSpec s{4.0, 3, 2, 3.0, 1.0};
  const auto w = bernoulli_weights(s, 0.3);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_NEAR(w[0], 0.1, 1e-16);
  EXPECT_NEAR(w[4], 0.35, 1e-16);
  EXPECT_NEAR(pressure_bernoulli(w, s), objective_f(0.3, s), 1e-12);
}

TEST(BoxCountTest, UniformSquareHasDimensionTwo) {
  SeededRng rng(2024);
  std::vector<Point> pts(1'000'000);
  for (Point& p : pts) p = {rng.uniform(), rng.uniform()};
  const BoxCountReport r = box_count(pts, 1, 8);
  EXPECT_NEAR(r.slope, 2.0, 0.1);
  for (std::size_t i = 1; i < r.counts.size(); ++i) {
    EXPECT_LT(r.scales[i], r.scales[i - 1]);
    EXPECT_GE(r.counts[i], r.counts[i - 1]);
  }
}

TEST(BoxCountTest, CantorDust) {
  const auto maps = CantorDust();
  const std::vector<double> w(4, 0.25);
  const auto pts = chaos_game(maps, w, 1'000'000, 100, 7);
  // Levels below 4 are saturated by the bounding square; at 12 the expected
  // box count (~3.6e4) is still far below the sample size.
  const BoxCountReport r = box_count(pts, 4, 12);
  EXPECT_NEAR(r.slope, 2.0 * std::log(2.0) / std::log(3.0), 0.1);
  EXPECT_GT(r.r_squared, 0.99);
}

TEST(BoxCountTest, InvariantUnderOneMoreMapApplication) {
  const auto maps = CantorDust();
  const std::vector<double> w(4, 0.25);
  const auto pts = chaos_game(maps, w, 200'000, 100, 9);
  SeededRng rng(10);
  std::vector<Point> moved(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) moved[i] = maps[rng.uniform_int(4)].apply(pts[i]);
  const double a = box_count(pts, 1, 7).slope;
  const double b = box_count(moved, 1, 7).slope;
  EXPECT_LT(std::abs(a - b), 0.05);
}

TEST(BoxCountTest, Errors) {
  std::vector<Point> same(2000, Point{0.3, 0.3});
  EXPECT_THROW(box_count(same, 1, 8), std::domain_error);
  std::vector<Point> few(10, Point{0.3, 0.3});
  EXPECT_THROW(box_count(few, 1, 8), std::invalid_argument);
  SeededRng rng(1);
  std::vector<Point> pts(2000);
  for (Point& p : pts) p = {rng.uniform(), rng.uniform()};
  EXPECT_THROW(box_count(pts, 3, 3), std::invalid_argument);
  EXPECT_THROW(box_count(pts, 1, 17), std::invalid_argument);
}

}  // namespace
}  // namespace gl_carpet
