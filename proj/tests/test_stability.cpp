#include <gtest/gtest.h>

#include <algorithm>

#include <Eigen/LU>

#include "cart/stability.hpp"
#include "support.hpp"

namespace cart {
namespace {

using testing::rel_diff;

double max_real(const CubicRoots& roots) {
  double m = roots[0].real();
  for (const auto& r : roots) m = std::max(m, r.real());
  return m;
}

TEST(Cubic, TripleZero) {
  for (const auto& r : cubic_roots({0.0, 0.0, 0.0})) EXPECT_EQ(std::abs(r), 0.0);
}

TEST(Cubic, ExpandedProduct) {
  // (x - 1)(x - 2)(x - 3)
  const auto r = cubic_roots({-6.0, 11.0, -6.0});
  EXPECT_NEAR(r[0].real(), 3.0, 1e-13);
  EXPECT_NEAR(r[1].real(), 2.0, 1e-13);
  EXPECT_NEAR(r[2].real(), 1.0, 1e-13);
  for (const auto& z : r) EXPECT_EQ(z.imag(), 0.0);
}

TEST(Cubic, RootsRebuildTheCoefficients) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const CubicCoeffs c{u(rng), u(rng), u(rng)};
    const auto r = cubic_roots(c);
    // Vieta: -(r0 + r1 + r2), r0 r1 + r0 r2 + r1 r2, -r0 r1 r2
    const auto s1 = -(r[0] + r[1] + r[2]);
    const auto s2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
    const auto s3 = -r[0] * r[1] * r[2];
    const double scale = 1.0 + c.max_abs();
    EXPECT_NEAR(s1.real(), c.a2, 1e-9 * scale);
    EXPECT_NEAR(s2.real(), c.a1, 1e-9 * scale * scale);
    EXPECT_NEAR(s3.real(), c.a0, 1e-9 * scale * scale * scale);
    EXPECT_NEAR(s1.imag() + s2.imag() + s3.imag(), 0.0, 1e-9 * scale * scale * scale);
  }
}

TEST(Cubic, RouthHurwitzAgreesWithRoots) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const CubicCoeffs c{u(rng), u(rng), u(rng)};
    const double m = max_real(cubic_roots(c));
    if (std::abs(m) < 1e-9) continue;
    EXPECT_EQ(routh_hurwitz_stable(c), m < 0.0) << c.a2 << " " << c.a1 << " " << c.a0;
    ++checked;
  }
  EXPECT_GT(checked, 990);
}

TEST(Cubic, RouthHurwitzCases) {
  EXPECT_TRUE(routh_hurwitz_stable(char_poly_p3(ModelParams{})));
  EXPECT_FALSE(routh_hurwitz_stable({1.0, 1.0, -0.1}));
}

TEST(EigenP1, Standard) {
  const auto ev = eigenvalues_p1(ModelParams{});
  EXPECT_EQ(ev[0], 0.2);
  EXPECT_LT(rel_diff(ev[1], -1.0 / 45.0), 1e-15);
  EXPECT_NEAR(ev[2], 0.0725, 1e-15);
}

TEST(EigenP1, NoInputIsStableInC) {
  ModelParams p;
  p.I0 = 0.0;
  EXPECT_EQ(eigenvalues_p1(p)[2], -1.0 / p.tau_C);
}

TEST(EigenP1, ThirdEigenvalueVanishesAtBlueThreshold) {
  // Bisection on the closed form, independent of thresholds().
  ModelParams p;
  double lo = 0.0, hi = 1e9;
  for (int i = 0; i < 200; ++i) {
    p.I0 = 0.5 * (lo + hi);
    (eigenvalues_p1(p)[2] < 0.0 ? lo : hi) = p.I0;
  }
  EXPECT_LT(rel_diff(0.5 * (lo + hi), thresholds(ModelParams{}).blue), 1e-12);
  p.I0 = thresholds(ModelParams{}).blue;
  EXPECT_NEAR(eigenvalues_p1(p)[2], 0.0, 1e-12);
}

TEST(EigenP2, Standard) {
  const auto ev = eigenvalues_p2(ModelParams{});
  EXPECT_LT(rel_diff(ev[0].real(), 0.2 - 1e-11 * 29.0 / 720.0 * 1e11), 1e-13);
  EXPECT_NEAR(ev[0].real(), 0.159722, 1e-6);
}

TEST(EigenP2, StableBetweenRedAndGreen) {
  ModelParams p;
  const Thresholds t = thresholds(p);
  for (double f : {0.01, 0.25, 0.5, 0.75, 0.99}) {
    p.I0 = t.red + f * (t.green - t.red);
    for (const auto& l : eigenvalues_p2(p)) EXPECT_LT(l.real(), 0.0) << p.I0;
  }
}

TEST(EigenP2, BlockPairSharesSign) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    const auto P2 = equilibrium(EquilibriumKind::P2, p);
    if (!P2.defined || !(P2.coords(kCarT) * P2.coords(kBCell) > 0.0)) continue;
    const auto ev = eigenvalues_p2(p);
    EXPECT_EQ(ev[1].real() > 0.0, ev[2].real() > 0.0);
  }
}

TEST(EigenP2, QuarticRealnessTestMatchesDiscriminant) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    const auto P2 = equilibrium(EquilibriumKind::P2, p);
    if (!P2.defined) continue;
    const auto ev = eigenvalues_p2(p);
    const double T = (ev[1] + ev[2]).real();
    const double disc = T * T - 4.0 * p.alpha * p.rho_C * P2.coords(kBCell) * P2.coords(kCarT);
    if (std::abs(disc) < 1e-9 * T * T) continue;
    EXPECT_EQ(p2_block_eigenvalues_real(p), disc > 0.0);
  }
}

TEST(CharPolyP3, Standard) {
  const CubicCoeffs c = char_poly_p3(ModelParams{});
  EXPECT_LT(rel_diff(c.a2, 0.222222222222), 1e-9);
  EXPECT_LT(rel_diff(c.a1, 8.0e-3), 1e-9);
  EXPECT_LT(rel_diff(c.a0, 1.27778e-3), 1e-5);
  EXPECT_LT(rel_diff(c.a0, 2.875e9 * 2e-12 * (0.2 + 1.0 / 45.0)), 1e-12);
}

TEST(CharPolyP3, LinearTermVanishesOnGreen) {
  ModelParams p;
  p.I0 = p.stimulation_scale();
  EXPECT_EQ(char_poly_p3(p).a1, 0.0);
}

TEST(CharPolyP3, MatchesDeterminantOfJacobian) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    const auto P3 = equilibrium(EquilibriumKind::P3, p);
    const Eigen::Matrix3d J = jacobian(P3.coords, p);
    const CubicCoeffs c = char_poly_p3(p);
    for (double lambda : {-0.3, 0.05, 0.7}) {
      const double det = (J - lambda * Eigen::Matrix3d::Identity()).determinant();
      const double poly = c(lambda).real();
      EXPECT_NEAR(-det, poly, 1e-9 * std::max({std::abs(poly), c.max_abs(), 1e-3}));
    }
  }
}

TEST(Classify, StandardSigns) {
  const ModelParams p;
  const auto r1 = classify(EquilibriumKind::P1, p);
  EXPECT_EQ(r1.dim_stable, 1);
  EXPECT_EQ(r1.dim_unstable, 2);
  const auto r2 = classify(EquilibriumKind::P2, p);
  EXPECT_EQ(r2.dim_stable, 2);
  EXPECT_EQ(r2.dim_unstable, 1);
  const auto r3 = classify(EquilibriumKind::P3, p);
  EXPECT_TRUE(r3.stable);
  EXPECT_EQ(r3.dim_stable, 3);
  EXPECT_EQ(r3.dim_unstable, 0);
}

TEST(Classify, P2StableInR3) {
  ModelParams p;
  p.I0 = 3e9;
  const auto r = classify(EquilibriumKind::P2, p);
  EXPECT_TRUE(r.stable);
  EXPECT_TRUE(r.biological);
}

TEST(Classify, NonHyperbolicAtRed) {
  ModelParams p;
  p.I0 = thresholds(p).red;
  EXPECT_FALSE(classify(EquilibriumKind::P3, p).hyperbolic);
  EXPECT_FALSE(classify(EquilibriumKind::P3, p).stable);
}

TEST(Classify, DimsSumToThreeWhenHyperbolic) {
  std::mt19937_64 rng(37);
  for (int i = 0; i < 300; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    for (const auto& point : equilibria(p)) {
      if (!point.defined) continue;
      const auto r = classify(point, p);
      if (r.hyperbolic) EXPECT_EQ(r.dim_stable + r.dim_unstable, 3);
      EXPECT_EQ(r.stable, std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                      [](auto l) { return l.real() < -kZeroRealPartTolerance * std::max(1.0, std::abs(l)); }));
    }
  }
}

TEST(Thresholds, StandardRationals) {
  const Thresholds t = thresholds(ModelParams{});
  EXPECT_LT(rel_diff(t.blue, 5e9 * 4.0 / 49.0), 1e-15);
  EXPECT_LT(rel_diff(t.red, 5e9 * 40.0 / 85.0), 1e-15);
  EXPECT_LT(rel_diff(t.green, 5e9), 1e-15);
  EXPECT_NEAR(t.blue, 4.08163e8, 1e3);
  EXPECT_NEAR(t.red, 2.35294e9, 1e4);
}

TEST(Thresholds, OrderedOverRandomDraws) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const Thresholds t = thresholds(testing::random_scenario(rng).params);
    EXPECT_LT(t.blue, t.red);
    EXPECT_LT(t.red, t.green);
  }
}

TEST(Region, Labels) {
  ModelParams p;
  EXPECT_EQ(region_classify(p), (RegionResult{RegionLabel::R2, false}));
  p.I0 = 5e9;
  EXPECT_EQ(region_classify(p), (RegionResult{RegionLabel::R4, true}));
  p.I0 = 6e9;
  EXPECT_EQ(region_classify(p), (RegionResult{RegionLabel::R4, false}));
  p.I0 = 0.0;
  EXPECT_EQ(region_classify(p), (RegionResult{RegionLabel::R1, true}));
  p.I0 = -1.0;
  EXPECT_EQ(region_classify(p).label, RegionLabel::NonBiological);
  p.I0 = 3e9;
  EXPECT_EQ(region_classify(p).label, RegionLabel::R3);
}

TEST(Region, StabilityMatchesLabel) {
  // R1/R2: P3 is the stable point; R3: P2; R4: none.
  std::mt19937_64 rng(43);
  for (int i = 0; i < 500; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    const RegionResult r = region_classify(p);
    const bool p3 = classify(EquilibriumKind::P3, p).stable && is_biological(equilibrium(EquilibriumKind::P3, p));
    const auto P2 = equilibrium(EquilibriumKind::P2, p);
    const bool p2 = P2.defined && is_biological(P2) && classify(P2, p).stable;
    switch (r.label) {
      case RegionLabel::R1:
      case RegionLabel::R2: EXPECT_TRUE(p3); break;
      case RegionLabel::R3: EXPECT_TRUE(p2); break;
      case RegionLabel::R4: EXPECT_FALSE(p2 || p3); break;
      case RegionLabel::NonBiological: ADD_FAILURE(); break;
    }
  }
}

TEST(Hopf, FirstLyapunovCoefficient) {
  EXPECT_LT(rel_diff(hopf_l1(ModelParams{}), std::pow(20.0, 1.5) * 1e-22 / (3.0 * std::sqrt(0.2))), 1e-14);
  EXPECT_NEAR(hopf_l1(ModelParams{}), 6.6667e-21, 1e-25);
  ModelParams p;
  p.rho_C = 0.0;
  EXPECT_EQ(hopf_l1(p), 0.0);
  std::mt19937_64 rng(47);
  for (int i = 0; i < 1000; ++i) EXPECT_GT(hopf_l1(testing::random_scenario(rng).params), 0.0);
}

TEST(Focus, StandardIsStableFocus) {
  const FocusParams f = focus_params(ModelParams{});
  EXPECT_TRUE(f.is_focus);
  EXPECT_LT(f.alpha_re, 0.0);
  EXPECT_GT(f.omega, 0.0);
  EXPECT_LT(f.strong_eig, f.alpha_re);
}

TEST(Focus, RealBandAtTau20) {
  // Most of the band lies past the red curve; only a thin strip above its
  // lower edge keeps P3 biological.
  ModelParams p;
  p.I0 = 0.5e9;
  const auto edges = focus_band_edges(p, 7e-11, 1.5e-9);
  ASSERT_GE(edges.size(), 2u);
  ModelParams inside = p;
  inside.rho_C = 1.005 * edges[0] / p.tau_C;
  ASSERT_TRUE(is_biological(equilibrium(EquilibriumKind::P3, inside)));
  EXPECT_FALSE(focus_params(inside).is_focus);
  ModelParams below = p;
  below.rho_C = 0.9 * edges[0] / p.tau_C;
  EXPECT_TRUE(focus_params(below).is_focus);
}

TEST(Focus, PeriodDivergesAtBandEdge) {
  ModelParams p;
  const double edge = focus_band_edges(p, 7e-11, 1.5e-9).at(0);
  double last = 0.0;
  for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
    ModelParams q = p;
    q.rho_C = edge * (1.0 - gap) / p.tau_C;
    const double period = focus_params(q).period();
    EXPECT_GT(period, last);
    last = period;
  }
  EXPECT_GT(last, 10.0 * focus_params(p).period());
}

TEST(Focus, IsFocusIffNegativeDiscriminant) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = testing::random_scenario(rng).params;
    if (!is_biological(equilibrium(EquilibriumKind::P3, p))) continue;
    EXPECT_EQ(focus_params(p).is_focus, discriminant(char_poly_p3(p)) < 0.0);
  }
}

}  // namespace
}  // namespace cart
