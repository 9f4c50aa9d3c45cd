#include "gl_carpet/maximizer.hpp"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "gl_carpet/constructor.hpp"

namespace gl_carpet {
namespace {

const double kB1 = 3.0 * kLog2;

// Dense-grid maximum of objective_f, independent of the bracketing path.
LocalMax DenseGridMax(const CarpetSpec& s, int n) {
  LocalMax best{0.0, objective_f(0.0, s)};
  for (int i = 1; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    const double v = objective_f(x, s);
    if (v > best.value) best = {x, v};
  }
  return best;
}

TEST(GlobalMaximaTest, Example1HasTwoSymmetricMaxima) {
  const Construction c = synthesize(kB1);
  const MaximizerReport r = global_maxima(c.spec);
  ASSERT_EQ(r.certified_count, 2);
  EXPECT_NEAR(r.maxima[0].x, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.maxima[1].x, 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(r.maxima[0].value, r.maxima[1].value, 1e-10);
  EXPECT_NEAR(r.global_value, 0.17441604792151595, 1e-9);
  EXPECT_NEAR(r.global_value, DenseGridMax(c.spec, 300000).value, 1e-9);
}

TEST(GlobalMaximaTest, PairsAreSymmetricForConstructedSpecs) {
  for (double b : {2.1, 2.5, 3.0, 3.9}) {
    const Construction c = synthesize(b, {AlphabetStrategy::kMinimal});
    const MaximizerReport r = global_maxima(c.spec);
    ASSERT_EQ(r.certified_count, 2) << b;
    EXPECT_NEAR(r.maxima[0].x + r.maxima[1].x, 1.0, 1e-6);
    EXPECT_NEAR(objective_f(r.maxima[0].x, c.spec), objective_f(1.0 - r.maxima[0].x, c.spec),
                1e-10);
    EXPECT_NEAR(r.global_value, c.constants.m_param, 1e-9);
  }
}

TEST(GlobalMaximaTest, BelowCurvatureThresholdMaximumIsUnique) {
  ConstructionOptions opts;
  opts.alphabet_strategy = AlphabetStrategy::kMinimal;
  opts.enforce_curvature_condition = false;
  const Construction c = synthesize(1.5, opts);
  const MaximizerReport r = global_maxima(c.spec);
  ASSERT_EQ(r.certified_count, 1);
  EXPECT_NEAR(r.maxima[0].x, 0.5, 1e-6);
  const LocalMax grid = DenseGridMax(c.spec, 200000);
  EXPECT_NEAR(grid.x, 0.5, 1e-5);
}

TEST(GlobalMaximaTest, DegenerateSpecReducesToEntropy) {
  const CarpetSpec s{2.0, 1, 1, 1.0, 1.0};
  const MaximizerReport r = global_maxima(s);
  ASSERT_EQ(r.certified_count, 1);
  EXPECT_NEAR(r.maxima[0].x, 0.5, 1e-6);
  EXPECT_NEAR(r.global_value, kLog2, 1e-12);
}

TEST(GlobalMaximaTest, MaximumNearEndpointIsFound) {
  // Large log(ell_a) / lambda pushes the maximum towards x = 1.
  const CarpetSpec s{1.5, 1000, 1, 1.0, 1.0};
  const MaximizerReport r = global_maxima(s);
  ASSERT_EQ(r.certified_count, 1);
  EXPECT_NEAR(r.maxima[0].x, DenseGridMax(s, 100000).x, 1e-5);
}

TEST(GlobalMaximaTest, GridResolutionStability) {
  const Construction c = synthesize(kB1);
  MaximizerOptions coarse;
  coarse.grid_points = 4096;
  MaximizerOptions fine;
  fine.grid_points = 8192;
  const MaximizerReport a = global_maxima(c.spec, coarse);
  const MaximizerReport b = global_maxima(c.spec, fine);
  ASSERT_EQ(a.certified_count, b.certified_count);
  for (int i = 0; i < a.certified_count; ++i) {
    EXPECT_NEAR(a.maxima[i].x, b.maxima[i].x, 1e-9);
  }
}

TEST(GlobalMaximaTest, Deterministic) {
  const Construction c = synthesize(kB1);
  const MaximizerReport a = global_maxima(c.spec);
  const MaximizerReport b = global_maxima(c.spec);
  ASSERT_EQ(a.maxima.size(), b.maxima.size());
  for (std::size_t i = 0; i < a.maxima.size(); ++i) {
    EXPECT_EQ(a.maxima[i].x, b.maxima[i].x);
    EXPECT_EQ(a.maxima[i].value, b.maxima[i].value);
  }
}

TEST(GlobalMaximaTest, OptionValidation) {
  const CarpetSpec s{2.0, 1, 1, 1.0, 1.0};
  MaximizerOptions o;
  o.grid_points = 100;
  EXPECT_THROW(global_maxima(s, o), std::invalid_argument);
  o = {};
  o.value_tol = 0.0;
  EXPECT_THROW(global_maxima(s, o), std::invalid_argument);
}

TEST(GapCertificateTest, Example1) {
  const Construction c = synthesize(kB1);
  const GapCertificate cert = verify_gap_nonpositive(c.constants, 100000);
  EXPECT_LE(cert.max_gap, 1e-10);
  ASSERT_EQ(cert.roots.size(), 2u);
  EXPECT_NEAR(cert.roots[0], 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(cert.roots[1], 2.0 / 3.0, 1e-6);
  EXPECT_TRUE(cert.certified());
}

TEST(GapCertificateTest, ShiftedMFailsOrLosesRoots) {
  const Construction c = synthesize(kB1);
  DerivedConstants up = c.constants;
  up.m_param += 0.1;
  const GapCertificate a = verify_gap_nonpositive(up, 20000);
  EXPECT_NEAR(a.max_gap, -0.1, 1e-9);
  EXPECT_TRUE(a.roots.empty());
  EXPECT_FALSE(a.certified());

  DerivedConstants down = c.constants;
  down.m_param -= 0.1;
  const GapCertificate b = verify_gap_nonpositive(down, 20000);
  EXPECT_NEAR(b.max_gap, 0.1, 1e-9);
  EXPECT_FALSE(b.certified());
}

TEST(SimplexBruteforceTest, FiveSymbolsMatchesOneDimensionalMaximum) {
  const CarpetSpec s{4.0, 3, 2, 3.0, 1.0};
  // mpmath: unique maximizer of objective_f at x = 0.35744026971303272.
  constexpr double kOneDimMax = 0.58968046616736104;
  const SimplexResult r = simplex_bruteforce(s, {40, 8, 1});
  EXPECT_NEAR(r.best_value, kOneDimMax, 1e-6);
  ASSERT_EQ(r.best_p.size(), 5u);
  EXPECT_NEAR(r.best_p[0], r.best_p[1], 1e-4);
  EXPECT_NEAR(r.best_p[1], r.best_p[2], 1e-4);
  EXPECT_NEAR(r.best_p[3], r.best_p[4], 1e-4);
  EXPECT_NEAR(r.best_p[0] + r.best_p[1] + r.best_p[2], 0.35744026971303272, 1e-4);
  EXPECT_NEAR(std::accumulate(r.best_p.begin(), r.best_p.end(), 0.0), 1.0, 1e-12);
}

TEST(SimplexBruteforceTest, PerturbingConditionalsLowersValue) {
  const CarpetSpec s{4.0, 3, 2, 3.0, 1.0};
  const SimplexResult r = simplex_bruteforce(s, {40, 8, 1});
  std::vector<double> p = r.best_p;
  p[0] += 1e-3;
  p[1] -= 1e-3;
  EXPECT_LT(pressure_bernoulli(p, s), r.best_value);
}

TEST(SimplexBruteforceTest, TwoSymbolsIsTheSegment) {
  const CarpetSpec s{2.5, 1, 1, 2.0, 1.0};
  const SimplexResult r = simplex_bruteforce(s, {20, 4, 0});
  const MaximizerReport one_dim = global_maxima(s);
  EXPECT_NEAR(r.best_value, one_dim.global_value, 1e-12);
}

TEST(SimplexBruteforceTest, SampledLatticeStillConverges) {
  const CarpetSpec s{4.0, 3, 2, 3.0, 1.0};
  SimplexOptions o{40, 8, 7};
  o.lattice_budget = 5000;
  const SimplexResult r = simplex_bruteforce(s, o);
  EXPECT_EQ(r.lattice_points_evaluated, 5000);
  EXPECT_NEAR(r.best_value, 0.58968046616736104, 1e-6);
}

TEST(SimplexBruteforceTest, Rejections) {
  const CarpetSpec big{40.0, 8, 1, 3.0, 1.0};
  EXPECT_THROW(simplex_bruteforce(big), std::invalid_argument);
  const CarpetSpec s{4.0, 3, 2, 3.0, 1.0};
  EXPECT_THROW(simplex_bruteforce(s, {5, 8, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace gl_carpet
