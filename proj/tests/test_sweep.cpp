#include <gtest/gtest.h>

#include <cstring>

#include <Eigen/QR>

#include "cart/sweep.hpp"
#include "support.hpp"

namespace cart {
namespace {

using testing::rel_diff;

GridSpec slice_at_standard_product(int count) {
  GridSpec g;
  g.x = {"I0", 1e8, 6e9, count};
  g.y = {"tauC_rhoC", 2e-10, 2e-10, 1};
  g.allow_out_of_range = true;
  return g;
}

GridSpec wide_region_grid() {
  GridSpec g;
  g.x = {"I0", -1e9, 6e9, 71};
  g.allow_out_of_range = true;
  return g;
}

TEST(Grid, Validation) {
  GridSpec g;
  EXPECT_NO_THROW(g.validate());
  g.x.name = "rho_L";
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = {};
  g.x.max = 6e9;
  EXPECT_THROW(g.validate(), RangeError);
  g.allow_out_of_range = true;
  EXPECT_NO_THROW(g.validate());
  g = {};
  g.y.name = "I0";
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Grid, CellScenario) {
  GridSpec g;
  const Scenario s = g.at(50, 0);
  EXPECT_EQ(s.params.I0, 5e9);
  EXPECT_DOUBLE_EQ(s.params.stimulation_product(), 7e-11);
  EXPECT_EQ(s.params.tau_C, 20.0);
}

TEST(RegionMap, BoundariesOnStandardSlice) {
  const RegionMap map = region_map(slice_at_standard_product(591));
  const Thresholds t = thresholds(ModelParams{});
  const GridSpec& g = map.grid;
  for (int ix = 0; ix < g.x.count; ++ix) {
    const double I0 = g.x.value(ix);
    const RegionLabel expected = I0 < t.blue  ? RegionLabel::R1
                                 : I0 < t.red ? RegionLabel::R2
                                 : I0 < t.green ? RegionLabel::R3
                                                : RegionLabel::R4;
    EXPECT_EQ(map.at(ix, 0).label, expected) << I0;
  }
}

TEST(RegionMap, MonotoneAlongI0) {
  GridSpec g = wide_region_grid();
  const RegionMap map = region_map(g);
  for (int iy = 0; iy < g.y.count; ++iy) {
    int last = 0;
    for (int ix = 0; ix < g.x.count; ++ix) {
      const int label = static_cast<int>(map.at(ix, iy).label);
      EXPECT_GE(label, last);
      last = label;
      if (g.x.value(ix) >= 0.0 && g.x.value(ix) < map.thresholds[iy * g.x.count + ix].blue) {
        EXPECT_EQ(map.at(ix, iy).label, RegionLabel::R1);
      }
    }
  }
}

TEST(RegionMap, ParallelMatchesSerial) {
  GridSpec g = wide_region_grid();
  const RegionMap a = region_map(g, 1);
  const RegionMap b = region_map(g, 4);
  EXPECT_EQ(a.cells, b.cells);
}

TEST(Surface, FirstPeakOverTumourAndBCells) {
  GridSpec g;
  g.x = {"L0", 1e10, 1e11, 6};
  g.y = {"B0", 1e8, 1e9, 4};
  const PeakSurface s = peak_surface(g, 1, PeakQuantity::Magnitude);
  ASSERT_EQ(s.missing.count(), 0);
  for (int ix = 0; ix < g.x.count; ++ix) {
    const double spread = s.values.col(ix).maxCoeff() / s.values.col(ix).minCoeff() - 1.0;
    EXPECT_LT(spread, 0.02) << "B0 should barely matter";
  }
  for (int iy = 0; iy < g.y.count; ++iy) {
    Eigen::MatrixXd A(g.x.count, 2);
    Eigen::VectorXd b(g.x.count);
    for (int ix = 0; ix < g.x.count; ++ix) {
      A(ix, 0) = 1.0;
      A(ix, 1) = g.x.value(ix);
      b(ix) = s.values(iy, ix);
    }
    const Eigen::VectorXd fit = A.colPivHouseholderQr().solve(b);
    const double ss_res = (A * fit - b).squaredNorm();
    const double ss_tot = (b.array() - b.mean()).square().sum();
    EXPECT_GT(1.0 - ss_res / ss_tot, 0.99);
    EXPECT_GT(fit(1), 0.0);
  }
  // Standard point sits in the 2.5e11 ballpark.
  EXPECT_LT(std::abs(std::log(s.values.maxCoeff() / 2.5e11)), std::log(2.0));
}

TEST(Surface, SmallInfluenceOfInitialCarTDose) {
  GridSpec g;
  g.x = {"L0", 1e10, 1e11, 4};
  g.y = {"B0", 1e8, 1e9, 3};
  g.fixed.init.C0 = 1e7;
  const PeakSurface low = peak_surface(g, 1, PeakQuantity::Magnitude);
  g.fixed.init.C0 = 1e8;
  const PeakSurface high = peak_surface(g, 1, PeakQuantity::Magnitude);
  const double worst = ((low.values - high.values).abs() / low.values).maxCoeff();
  EXPECT_LT(worst, 0.05);
}

TEST(Surface, LaterMaximaVanishOnGreen) {
  GridSpec g;
  g.x = {"I0", 5e9, 5e9, 1};
  g.y = {"tauC_rhoC", 2e-10, 2e-10, 1};
  const PeakSurface s = peak_surface(g, 2, PeakQuantity::Magnitude);
  EXPECT_TRUE(s.missing(0, 0));
  EXPECT_TRUE(std::isnan(s.values(0, 0)));
  ModelParams p;
  p.I0 = 5e9;
  EXPECT_LT(integrate(p, InitialState{}, kDefaultHorizon).back().y(kLeukemic), 1.0);
}

TEST(Surface, QuantitiesAgreeForFirstPeak) {
  GridSpec g;
  g.x.count = 3;
  g.y.count = 3;
  const PeakSurface a = peak_surface(g, 1, PeakQuantity::FirstTime);
  const PeakSurface b = peak_surface(g, 1, PeakQuantity::InterPeakTime);
  EXPECT_TRUE((a.values == b.values).all());
  for (int iy = 0; iy < 3; ++iy) {
    for (int ix = 0; ix < 3; ++ix) EXPECT_EQ(a.missing(iy, ix), !std::isfinite(a.values(iy, ix)));
  }
}

TEST(Surface, ParallelMatchesSerialBitwise) {
  GridSpec g;
  g.x.count = 5;
  g.y.count = 4;
  SweepOptions serial, parallel;
  parallel.workers = 3;
  const PeakSurface a = peak_surface(g, 2, PeakQuantity::InterPeakTime, serial);
  const PeakSurface b = peak_surface(g, 2, PeakQuantity::InterPeakTime, parallel);
  for (Eigen::Index i = 0; i < a.values.size(); ++i) {
    EXPECT_EQ(std::memcmp(&a.values(i), &b.values(i), sizeof(double)), 0);
  }
  EXPECT_TRUE((a.missing == b.missing).all());
}

TEST(Focus, StandardTheory) {
  const FocusReport r = focus_convergence(Scenario{}, 8);
  EXPECT_NEAR(r.theory_period, 81.2415, 1e-3);
  EXPECT_NEAR(r.theory_ratio, 1.4638, 1e-3);
  EXPECT_EQ(r.L3, 2.875e9);
  ASSERT_EQ(r.deltas.size(), 7u);
  // Observed spacing approaches the period from above, shrinking each time.
  for (std::size_t n = 0; n + 1 < r.deltas.size(); ++n) {
    EXPECT_GT(r.deltas[n], r.deltas[n + 1]);
    EXPECT_GT(r.deltas[n], r.theory_period);
  }
}

TEST(Focus, RejectsRealSpectrum) {
  Scenario s;
  s.params.I0 = 3e9;
  EXPECT_THROW(focus_convergence(s, 3), std::domain_error);
}

TEST(Focus, ApproximationEnvelope) {
  // Late in the approach C(t) - C3 is a damped sinusoid at the focus rate and
  // frequency whose amplitude is the fitted K sqrt(k_s^2 + k_c^2).
  Scenario s;
  s.params.I0 = 0.5e9;
  const FocusParams f = focus_params(s.params);
  const double C3 = equilibrium(EquilibriumKind::P3, s.params).coords(kCarT);
  IntegrationOptions o;
  o.sample_interval = 1.0;
  const Trajectory tr = integrate(s.params, s.init, 6000.0, o);
  std::vector<double> t, y;
  for (const auto& smp : tr.samples) {
    if (smp.t < 4000.0) continue;
    t.push_back(smp.t);
    y.push_back(smp.y(kCarT) - C3);
  }
  Eigen::MatrixXd A(t.size(), 2);
  Eigen::VectorXd b(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double e = std::exp(f.alpha_re * t[i]);
    A(i, 0) = e * std::sin(f.omega * t[i]);
    A(i, 1) = e * std::cos(f.omega * t[i]);
    b(i) = y[i];
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  EXPECT_LT((A * c - b).norm() / b.norm(), 1e-3);
  const FocusApproximation approx;
  const double amplitude = approx.K * std::hypot(approx.k_s, approx.k_c);
  EXPECT_LT(rel_diff(c.norm(), amplitude), 0.1);
}

TEST(Remission, ShortDeepInR2) {
  Scenario s;
  s.params.I0 = 0.5e9;
  EXPECT_EQ(remission_duration(s).duration, 0.0);
}

TEST(Remission, UnboundedInR3) {
  Scenario s;
  s.params.I0 = thresholds(s.params).red * 1.02;
  const RemissionReport r = remission_duration(s);
  EXPECT_TRUE(r.reached_horizon);
  EXPECT_EQ(r.exit, kDefaultHorizon);
  EXPECT_GT(r.duration, 5000.0);
}

TEST(Remission, GrowsTowardRed) {
  double last = -1.0;
  for (double I0 : {1.5e9, 1.8e9, 2.0e9, 2.1e9, 2.2e9}) {
    Scenario s;
    s.params.I0 = I0;
    const double d = remission_duration(s).duration;
    EXPECT_GT(d, last) << I0;
    last = d;
  }
}

}  // namespace
}  // namespace cart
