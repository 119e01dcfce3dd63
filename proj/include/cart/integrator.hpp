#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "cart/model.hpp"

namespace cart {

struct IntegrationOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-3;     // cells
  double blowup_cap = 1e15;  // cells
  double min_step = 1e-12;   // days
  // > 0: store samples on this uniform grid (plus event points) instead of at
  // every accepted step.
  double sample_interval = 0.0;
  double event_time_tol = 1e-6;  // days
};

enum class Termination {
  TimeEnd,
  Blowup,
  Tolerance,
  Stopped,  // an observer ended the run early
};

std::string_view to_string(Termination termination);

/// One accepted Dormand-Prince step with its continuous extension.
class DenseStep {
 public:
  double t0 = 0.0;
  double t1 = 0.0;  // may be earlier than t0 + h when the run stops mid-step
  State y0 = State::Zero();
  State y1 = State::Zero();

  /// 4th-order interpolant, valid for t in [t0, t0 + h].
  State operator()(double t) const;

 private:
  friend class StepperAccess;
  double h_ = 0.0;
  State r2_ = State::Zero(), r3_ = State::Zero(), r4_ = State::Zero(), r5_ = State::Zero();
};

struct StepStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double min_component = 0.0;  // over every accepted step end
};

/// Adaptive Dormand-Prince 5(4) integration. on_step is invoked after each
/// accepted step and returns false to stop the run. The per-component local
/// error is held below rel_tol |y| + abs_tol. Components above blowup_cap end
/// the run with Blowup; the final step is then truncated at the first
/// exceedance time.
Termination integrate_steps(const ModelParams& params, const State& y0, double t_end,
                            const IntegrationOptions& options,
                            const std::function<bool(const DenseStep&)>& on_step, StepStats* stats = nullptr);

enum class EventKind { LeukemicPeak, Blowup };

std::string_view to_string(EventKind kind);

struct Sample {
  double t = 0.0;
  State y = State::Zero();
};

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::LeukemicPeak;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::vector<Event> events;
  Termination terminated = Termination::TimeEnd;
  StepStats stats;

  const Sample& back() const { return samples.back(); }
};

Trajectory integrate(const ModelParams& params, const InitialState& init, double t_end,
                     const IntegrationOptions& options = {});

struct Peak {
  double t = 0.0;  // day
  double L = 0.0;  // cell
};

enum class PeakStop {
  MaxPeaks,
  TimeEnd,
  Blowup,
  Tolerance,
  AmplitudeFloor,
  // rho_C I0 > 1/tau_C makes C strictly increasing, so g has no further zero.
  NoFurtherPeaks,
};

std::string_view to_string(PeakStop stop);

struct PeakSeries {
  std::vector<Peak> peaks;
  PeakStop stop = PeakStop::TimeEnd;

  std::size_t size() const { return peaks.size(); }
  /// t_{n+1} - t_n.
  std::vector<double> deltas() const;
  /// L_{n+1} / L_n.
  std::vector<double> ratios() const;
  /// (L_n - level) / (L_{n+1} - level): the per-period decay of the deviation.
  std::vector<double> deviation_ratios(double level) const;
};

/// Local maxima of L: zero crossings of g(t) = rho_L - alpha C(t) from + to -
/// with L > 0, refined by bisection on the dense output. When P3 is
/// biologically meaningful, the search stops once |L_n - L3| < 1e-3 L3. With
/// rho_C I0 > 1/tau_C it stops after the first peak, which is then the last.
PeakSeries detect_peaks(const ModelParams& params, const InitialState& init, double t_end, std::size_t max_peaks,
                        const IntegrationOptions& options = {});

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
};

/// Euclidean distance of every sample to a point.
TimeSeries distance_series(const Trajectory& trajectory, const State& point);

struct BlowupCheck {
  bool blowup = false;
  std::optional<double> time;  // first time a component exceeded the cap
};

BlowupCheck check_blowup(const Trajectory& trajectory);

}  // namespace cart
