#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "cart/integrator.hpp"
#include "cart/stability.hpp"

namespace cart {

inline constexpr std::array<std::string_view, 5> kGridAxisNames{"I0", "tauC_rhoC", "L0", "B0", "C0"};

/// Default peak-search horizon: 20 years.
inline constexpr double kDefaultHorizon = 7300.0;

/// Table range of an axis; tauC_rhoC spans the product of the tau_C and rho_C ranges.
std::pair<double, double> axis_table_range(std::string_view name);

struct GridAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 51;

  double value(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

/// Row index runs over y, column index over x.
struct GridSpec {
  GridAxis x{"I0", 5e8, 5e9, 51};
  GridAxis y{"tauC_rhoC", 14.0 * 5e-12, 30.0 * 5e-11, 51};
  Scenario fixed;
  bool allow_out_of_range = false;

  /// Throws std::invalid_argument for unknown axes, count < 1, or ranges
  /// outside the table (unless allow_out_of_range).
  void validate() const;
  Scenario at(int ix, int iy) const;
};

struct SweepOptions {
  IntegrationOptions integration;
  double horizon = kDefaultHorizon;
  unsigned workers = 1;  // 0: all cores
};

struct RegionMap {
  GridSpec grid;
  std::vector<RegionResult> cells;    // row-major, rows over y
  std::vector<Thresholds> thresholds;  // one per cell

  const RegionResult& at(int ix, int iy) const { return cells[static_cast<std::size_t>(iy) * grid.x.count + ix]; }
};

/// Pointwise region_classify over the grid.
RegionMap region_map(const GridSpec& grid, unsigned workers = 1);

enum class PeakQuantity {
  Magnitude,      // L_k
  FirstTime,      // t_k, measured from the start
  InterPeakTime,  // t_k - t_{k-1}, with t_0 = 0
};

std::string_view to_string(PeakQuantity quantity);
PeakQuantity parse_peak_quantity(std::string_view text);

struct PeakSurface {
  GridSpec grid;
  int k = 1;
  PeakQuantity quantity = PeakQuantity::Magnitude;
  Eigen::ArrayXXd values;                               // rows over y, columns over x
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> missing;  // fewer than k peaks
  double horizon = kDefaultHorizon;
};

/// k-th peak quantity of L at every grid point (cells run in parallel, results
/// assembled by index).
PeakSurface peak_surface(const GridSpec& grid, int k, PeakQuantity quantity, const SweepOptions& options = {});

struct FocusReport {
  FocusParams focus;
  double L3 = 0.0;
  double theory_period = 0.0;  // 2 pi / omega
  double theory_ratio = 0.0;   // exp(-2 pi alpha / omega)
  PeakSeries peaks;
  std::vector<double> deltas;            // observed t_{n+1} - t_n
  std::vector<double> deviation_ratios;  // observed (L_n - L3) / (L_{n+1} - L3)
};

/// Observed peak sequence against the linear focus predictions. Throws
/// std::domain_error if P3 is not a biologically meaningful focus.
FocusReport focus_convergence(const Scenario& scenario, std::size_t n_peaks, const SweepOptions& options = {});

struct RemissionReport {
  double duration = 0.0;  // longest contiguous stay within the neighbourhood of P2 (day)
  double entry = 0.0;
  double exit = 0.0;
  bool reached_horizon = false;  // the longest stay was still ongoing at the horizon
};

/// Longest contiguous time with ||y(t) - P2|| < threshold_fraction ||P2||.
/// Throws std::domain_error if P2 is undefined.
RemissionReport remission_duration(const Scenario& scenario, double threshold_fraction = 0.05,
                                   const SweepOptions& options = {});

}  // namespace cart
