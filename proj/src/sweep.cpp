#include "cart/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cart/parallel.hpp"

namespace cart {

std::pair<double, double> axis_table_range(std::string_view name) {
  if (name == "tauC_rhoC") {
    const auto& tau = parameter_info("tau_C");
    const auto& rho = parameter_info("rho_C");
    return {tau.range_min * rho.range_min, tau.range_max * rho.range_max};
  }
  const auto& info = parameter_info(name);
  return {info.range_min, info.range_max};
}

void GridSpec::validate() const {
  for (const GridAxis* axis : {&x, &y}) {
    if (std::find(kGridAxisNames.begin(), kGridAxisNames.end(), axis->name) == kGridAxisNames.end()) {
      throw std::invalid_argument("grid axis must be one of I0, tauC_rhoC, L0, B0, C0 (got '" + axis->name + "')");
    }
    if (axis->count < 1) throw std::invalid_argument("grid axis '" + axis->name + "' needs count >= 1");
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max) || axis->max < axis->min) {
      throw std::invalid_argument("grid axis '" + axis->name + "' has an invalid range");
    }
    if (!allow_out_of_range) {
      const auto [lo, hi] = axis_table_range(axis->name);
      const double slack = 1e-12 * hi;
      if (axis->min < lo - slack || axis->max > hi + slack) {
        throw RangeError("grid axis '" + axis->name + "' leaves the table range; set allow_out_of_range to override");
      }
    }
  }
  if (x.name == y.name) throw std::invalid_argument("grid axes must differ");
}

Scenario GridSpec::at(int ix, int iy) const {
  Scenario s = fixed;
  set_value(s, x.name, x.value(ix));
  set_value(s, y.name, y.value(iy));
  return s;
}

RegionMap region_map(const GridSpec& grid, unsigned workers) {
  grid.validate();
  RegionMap map;
  map.grid = grid;
  const std::size_t n = static_cast<std::size_t>(grid.x.count) * grid.y.count;
  map.cells.resize(n);
  map.thresholds.resize(n);
  parallel_for(n, workers, [&](std::size_t i) {
    const int ix = static_cast<int>(i % grid.x.count);
    const int iy = static_cast<int>(i / grid.x.count);
    const ModelParams p = grid.at(ix, iy).params;
    map.cells[i] = region_classify(p);
    map.thresholds[i] = thresholds(p);
  });
  return map;
}

std::string_view to_string(PeakQuantity quantity) {
  switch (quantity) {
    case PeakQuantity::Magnitude: return "magnitude";
    case PeakQuantity::FirstTime: return "first_time";
    case PeakQuantity::InterPeakTime: return "inter_peak_time";
  }
  return "?";
}

PeakQuantity parse_peak_quantity(std::string_view text) {
  if (text == "magnitude") return PeakQuantity::Magnitude;
  if (text == "first_time") return PeakQuantity::FirstTime;
  if (text == "inter_peak_time") return PeakQuantity::InterPeakTime;
  throw std::invalid_argument("unknown peak quantity '" + std::string(text) +
                              "' (expected magnitude, first_time or inter_peak_time)");
}

PeakSurface peak_surface(const GridSpec& grid, int k, PeakQuantity quantity, const SweepOptions& options) {
  grid.validate();
  if (k < 1) throw std::invalid_argument("peak index k must be >= 1");
  PeakSurface surface;
  surface.grid = grid;
  surface.k = k;
  surface.quantity = quantity;
  surface.horizon = options.horizon;
  surface.values = Eigen::ArrayXXd::Constant(grid.y.count, grid.x.count, std::nan(""));
  surface.missing.setConstant(grid.y.count, grid.x.count, true);

  const std::size_t n = static_cast<std::size_t>(grid.x.count) * grid.y.count;
  parallel_for(n, options.workers, [&](std::size_t i) {
    const int ix = static_cast<int>(i % grid.x.count);
    const int iy = static_cast<int>(i / grid.x.count);
    const Scenario s = grid.at(ix, iy);
    const PeakSeries series = detect_peaks(s.params, s.init, options.horizon, k, options.integration);
    if (series.size() < static_cast<std::size_t>(k)) return;
    const Peak& peak = series.peaks[k - 1];
    double value = 0.0;
    switch (quantity) {
      case PeakQuantity::Magnitude: value = peak.L; break;
      case PeakQuantity::FirstTime: value = peak.t; break;
      case PeakQuantity::InterPeakTime: value = peak.t - (k > 1 ? series.peaks[k - 2].t : 0.0); break;
    }
    surface.values(iy, ix) = value;
    surface.missing(iy, ix) = false;
  });
  return surface;
}

FocusReport focus_convergence(const Scenario& scenario, std::size_t n_peaks, const SweepOptions& options) {
  validate(scenario);
  FocusReport report;
  report.focus = focus_params(scenario.params);
  if (!report.focus.is_focus) throw std::domain_error("P3 has only real eigenvalues; no focus dynamics");
  report.L3 = coexistence_tumor_level(scenario.params);
  report.theory_period = report.focus.period();
  report.theory_ratio = report.focus.deviation_decay_ratio();
  report.peaks = detect_peaks(scenario.params, scenario.init, options.horizon, n_peaks, options.integration);
  report.deltas = report.peaks.deltas();
  report.deviation_ratios = report.peaks.deviation_ratios(report.L3);
  return report;
}

RemissionReport remission_duration(const Scenario& scenario, double threshold_fraction,
                                   const SweepOptions& options) {
  validate(scenario);
  if (!(threshold_fraction > 0.0)) throw std::invalid_argument("threshold_fraction must be > 0");
  const EquilibriumPoint P2 = equilibrium(EquilibriumKind::P2, scenario.params);
  if (!P2.defined) throw std::domain_error("P2 is undefined for these parameters");
  const State target = P2.coords;
  const double radius = threshold_fraction * target.norm();
  // Negative inside the neighbourhood.
  const auto signed_gap = [&](const State& y) { return (y - target).norm() - radius; };

  RemissionReport best;
  bool inside = signed_gap(scenario.init.vector()) < 0.0;
  double entered = 0.0;
  double t_last = 0.0;
  const double tol = options.integration.event_time_tol;

  const auto close_run = [&](double t_exit) {
    if (t_exit - entered > best.duration) {
      best.duration = t_exit - entered;
      best.entry = entered;
      best.exit = t_exit;
    }
  };

  integrate_steps(scenario.params, scenario.init.vector(), options.horizon, options.integration,
                  [&](const DenseStep& step) {
                    const bool now_inside = signed_gap(step.y1) < 0.0;
                    if (now_inside != inside) {
                      // Refine the boundary crossing on the dense output.
                      double a = step.t0, b = step.t1;
                      while (b - a > tol) {
                        const double mid = 0.5 * (a + b);
                        if ((signed_gap(step(mid)) < 0.0) == inside) {
                          a = mid;
                        } else {
                          b = mid;
                        }
                      }
                      const double t_cross = 0.5 * (a + b);
                      if (inside) {
                        close_run(t_cross);
                      } else {
                        entered = t_cross;
                      }
                      inside = now_inside;
                    }
                    t_last = step.t1;
                    return true;
                  });
  if (inside) {
    const double before = best.duration;
    close_run(t_last);
    if (best.duration > before) best.reached_horizon = true;
  }
  return best;
}

}  // namespace cart
